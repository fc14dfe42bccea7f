mod common;

use common::*;
use rand::Rng;
use secrecy_region::channel::spectrum;
use secrecy_region::linalg::{cholesky, largest_gen_eig, HermitianMatrix};
use secrecy_region::regions::{gamma1, gamma2, max_rates};
use secrecy_region::sato::{sato_f1, sato_f2};
use secrecy_region::{ChannelPair, ExampleVariant};

// Frozen from the subspace oracle for the two-antenna example.
const LAMBDA1: f64 = 5.639871698998867;
const LAMBDA2: f64 = 9.849339938134403;
const R1_MAX_REAL: f64 = 1.247831171620238;
const R2_MAX_REAL: f64 = 1.65001352218867;

fn example_vectors() -> (Vec<C>, Vec<C>) {
    (vec![c(1.5, 0.0), c(0.0, 0.0)], vec![c(1.801, 0.0), c(0.872, 0.0)])
}

#[test]
fn oracle_reproduces_frozen_example_values() {
    let (h, g) = example_vectors();
    let (l1, _, l2, _) = spectrum_oracle(&h, &g, 10.0);
    assert!((l1 - LAMBDA1).abs() <= 1e-12 * LAMBDA1);
    assert!((l2 - LAMBDA2).abs() <= 1e-12 * LAMBDA2);
    assert!((0.5 * l1.log2() - R1_MAX_REAL).abs() <= 1e-12);
    assert!((0.5 * l2.log2() - R2_MAX_REAL).abs() <= 1e-12);
}

#[test]
fn example_spectrum_matches_golden_values() {
    let ch = ChannelPair::example(ExampleVariant::TextG);
    let s = spectrum(&ch).unwrap();
    assert!((s.lambda1 - LAMBDA1).abs() <= 1e-9);
    assert!((s.lambda2 - LAMBDA2).abs() <= 1e-9);
    let r = max_rates(&ch).unwrap();
    assert!((r.r1 - R1_MAX_REAL).abs() <= 1e-9);
    assert!((r.r2 - R2_MAX_REAL).abs() <= 1e-9);

    let (h, g) = example_vectors();
    let (_, e1, _, e2) = spectrum_oracle(&h, &g, 10.0);
    let align1: C = s.e1.entries().iter().zip(&e1).map(|(a, b)| a.conj() * b).sum();
    let align2: C = s.e2.entries().iter().zip(&e2).map(|(a, b)| a.conj() * b).sum();
    assert!((align1.norm() - 1.0).abs() < 1e-9);
    assert!((align2.norm() - 1.0).abs() < 1e-9);
}

#[test]
fn matrix_variant_is_close_to_text_variant() {
    let a = max_rates(&ChannelPair::example(ExampleVariant::TextG)).unwrap();
    let b = max_rates(&ChannelPair::example(ExampleVariant::MatrixG)).unwrap();
    assert!(b.r1 > 0.0 && b.r2 > 0.0);
    assert!((a.r1 - b.r1).abs() < 1e-2 && (a.r2 - b.r2).abs() < 1e-2);
    assert_ne!(a, b);
}

#[test]
fn cholesky_of_example_pencil_round_trips() {
    let ch = ChannelPair::example(ExampleVariant::TextG);
    let m = ch.gram_h();
    let l = cholesky(&m).unwrap();
    let back = l.reconstruct();
    let mut err = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            err += (back.get(i, j) - m.get(i, j)).norm_sqr();
        }
    }
    assert!(err.sqrt() <= 1e-12 * m.frobenius_norm());
}

#[test]
fn random_pencils_match_subspace_oracle() {
    let mut r = rng(11);
    for _ in 0..300 {
        let t = r.gen_range(2..=4);
        let u = gaussian_vector(&mut r, t);
        let v = gaussian_vector(&mut r, t);
        let a = HermitianMatrix::identity_plus_rank_one(1.0, &u.clone().into());
        let b = HermitianMatrix::identity_plus_rank_one(1.0, &v.clone().into());
        let got = largest_gen_eig(&a, &b).unwrap();
        let (want, _) = rank_one_pencil_top(&u, &v);
        assert!((got.lambda - want).abs() <= 1e-9 * want, "t={t}: {} vs {want}", got.lambda);
    }
}

#[test]
fn gamma_functions_match_scalar_expansion() {
    let mut r = rng(12);
    for _ in 0..100 {
        let ch = random_channel(&mut r);
        let s = spectrum(&ch).unwrap();
        for alpha in [0.0, 0.1, 0.37, 0.5, 0.9, 1.0] {
            let (o1, o2) = gamma_oracle(ch.h().entries(), ch.g().entries(), ch.power(), alpha);
            let g1 = gamma1(&ch, &s, alpha).unwrap();
            let (g2, _) = gamma2(&ch, &s, alpha).unwrap();
            assert!((g1 - o1).abs() <= 1e-9 * o1, "gamma1({alpha}): {g1} vs {o1}");
            assert!((g2 - o2).abs() <= 1e-9 * o2, "gamma2({alpha}): {g2} vs {o2}");
        }
    }
}

#[test]
fn example_gamma_values_match_oracle() {
    let ch = ChannelPair::example(ExampleVariant::TextG);
    let s = spectrum(&ch).unwrap();
    let (h, g) = example_vectors();
    for k in 0..=20 {
        let alpha = k as f64 / 20.0;
        let (o1, o2) = gamma_oracle(&h, &g, 10.0, alpha);
        assert!((gamma1(&ch, &s, alpha).unwrap() - o1).abs() <= 1e-9 * o1);
        assert!((gamma2(&ch, &s, alpha).unwrap().0 - o2).abs() <= 1e-9 * o2);
    }
}

#[test]
fn outer_bound_minimizers_match_grid_search() {
    let mut r = rng(13);
    let mut checked = 0;
    while checked < 12 {
        let ch = random_channel(&mut r);
        let share = r.gen_range(0.2..1.0);
        let k = random_psd(&mut r, ch.antennas(), ch.power() * share);
        let rho = c(r.gen_range(-0.7..0.7), r.gen_range(-0.7..0.7));
        let (f1, nu) = sato_f1(&ch, rho, &k).unwrap();
        let (f2, mu) = sato_f2(&ch, rho, &k).unwrap();
        if nu.re.abs().max(nu.im.abs()) > 2.9 || mu.re.abs().max(mu.im.abs()) > 2.9 {
            continue;
        }
        let (g1, _) = sato_grid_min(ch.h().entries(), ch.g().entries(), &k, rho);
        let (g2, _) = sato_grid_min(ch.g().entries(), ch.h().entries(), &k, rho.conj());
        assert!((f1 - g1.max(0.0)).abs() <= 1e-6, "f1 {f1} vs grid {g1}");
        assert!((f2 - g2.max(0.0)).abs() <= 1e-6, "f2 {f2} vs grid {g2}");
        checked += 1;
    }
}
