mod common;

use common::*;
use proptest::prelude::*;

use secrecy_region::channel::spectrum;
use secrecy_region::geometry::frontier_excess;
use secrecy_region::linalg::{largest_gen_eig, quadratic_form, ComplexVector, HermitianMatrix};
use secrecy_region::regions::{capacity_region, max_rates, region_contains};
use secrecy_region::sato::{sato_f1, sato_f2};
use secrecy_region::sdpc::{sdpc_identity_gap, sdpc_rates, CovariancePair};
use secrecy_region::{ChannelPair, FieldMode, SweepConfig};

fn cvec(t: usize) -> impl Strategy<Value = Vec<C>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| c(a, b)), t)
}

fn channel() -> impl Strategy<Value = ChannelPair> {
    (2usize..=3)
        .prop_flat_map(|t| (cvec(t), cvec(t), prop::sample::select(vec![0.1, 1.0, 10.0])))
        .prop_map(|(h, g, p)| ChannelPair::new(h.into(), g.into(), p, FieldMode::Complex).unwrap())
}

/// Hermitian matrix `M` and a positive definite `B = NᴴN + I/2`.
fn hermitian(t: usize) -> impl Strategy<Value = HermitianMatrix> {
    prop::collection::vec(cvec(t), t).prop_map(move |rows| {
        let mut m = HermitianMatrix::zeros(t);
        for r in &rows {
            m = m.add(&HermitianMatrix::rank_one(1.0, &r.clone().into())).unwrap();
        }
        // Indefinite: subtract a multiple of the identity.
        m.add(&HermitianMatrix::identity(t).scaled(-0.5 * m.trace() / t as f64)).unwrap()
    })
}

fn positive_definite(t: usize) -> impl Strategy<Value = HermitianMatrix> {
    prop::collection::vec(cvec(t), t).prop_map(move |rows| {
        let mut m = HermitianMatrix::identity(t).scaled(0.5);
        for r in &rows {
            m = m.add(&HermitianMatrix::rank_one(1.0, &r.clone().into())).unwrap();
        }
        m
    })
}

fn pencil() -> impl Strategy<Value = (HermitianMatrix, HermitianMatrix, Vec<C>)> {
    (2usize..=4).prop_flat_map(|t| (hermitian(t), positive_definite(t), cvec(t)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gen_eig_residual_contract((a, b, probe) in pencil()) {
        let r = largest_gen_eig(&a, &b).unwrap();
        let bound = 1e-9 * (a.frobenius_norm() + r.lambda.abs() * b.frobenius_norm());
        prop_assert!((r.evec.norm() - 1.0).abs() <= 1e-12);
        prop_assert!(r.residual <= bound, "residual {} > {}", r.residual, bound);
        // Recompute the residual independently.
        let av = a.mul_vec(&r.evec).unwrap();
        let bv = b.mul_vec(&r.evec).unwrap();
        let res: f64 = av.entries().iter().zip(bv.entries()).map(|(x, y)| (x - y * r.lambda).norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(res <= bound);
        // Largest by contract: no Rayleigh quotient exceeds it.
        let v: ComplexVector = probe.into();
        if v.norm() > 1e-6 {
            let q = quadratic_form(&v, &a, &v).unwrap().re / quadratic_form(&v, &b, &v).unwrap().re;
            prop_assert!(q <= r.lambda + 1e-9 * (1.0 + r.lambda.abs()));
        }
        // Phase rule: first entry of largest magnitude is real and non-negative.
        let e = r.evec.entries();
        let top = e.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let first = e.iter().find(|z| z.norm() >= top - 1e-12).unwrap();
        prop_assert!(first.im.abs() <= 1e-12 && first.re >= 0.0);
    }

    #[test]
    fn eigenvalues_are_at_least_one(ch in channel()) {
        let s = spectrum(&ch).unwrap();
        prop_assert!(s.lambda1 >= 1.0 - 1e-12 && s.lambda2 >= 1.0 - 1e-12);
    }

    #[test]
    fn swap_exchanges_spectrum_bitwise(ch in channel()) {
        let a = spectrum(&ch).unwrap();
        let b = spectrum(&ch.swapped()).unwrap();
        prop_assert_eq!(a.lambda1, b.lambda2);
        prop_assert_eq!(a.lambda2, b.lambda1);
        prop_assert_eq!(&a.e1, &b.e2);
        prop_assert_eq!(&a.e2, &b.e1);
    }

    #[test]
    fn swap_with_conjugate_rho_exchanges_outer_bounds(ch in channel(), re in -0.9..0.9f64, im in -0.4..0.4f64, seed in any::<u64>()) {
        let k = random_psd(&mut rng(seed), ch.antennas(), ch.power());
        let rho = c(re, im);
        prop_assert_eq!(sato_f1(&ch, rho, &k).unwrap(), sato_f2(&ch.swapped(), rho.conj(), &k).unwrap());
        prop_assert_eq!(sato_f2(&ch, rho, &k).unwrap(), sato_f1(&ch.swapped(), rho.conj(), &k).unwrap());
    }

    #[test]
    fn single_user_rates_grow_with_power(ch in channel()) {
        let mut last = max_rates(&ch.with_power(0.0).unwrap()).unwrap();
        prop_assert_eq!(last.r1, 0.0);
        for p in [0.05, 0.1, 0.5, 1.0, 3.0, 10.0, 30.0] {
            let now = max_rates(&ch.with_power(p).unwrap()).unwrap();
            prop_assert!(now.r1 >= last.r1 - 1e-12 && now.r2 >= last.r2 - 1e-12);
            last = now;
        }
    }

    #[test]
    fn dirty_paper_identity_on_random_channels(ch in channel(), alpha in 0.0..=1.0f64) {
        prop_assert!(sdpc_identity_gap(&ch, alpha).unwrap() <= 1e-9);
    }

    #[test]
    fn user1_rate_ignores_second_layer(ch in channel(), seed in any::<u64>(), split in 0.0..1.0f64) {
        let mut r = rng(seed);
        let t = ch.antennas();
        let k1 = random_psd(&mut r, t, split * ch.power());
        let k2a = random_psd(&mut r, t, (1.0 - split) * ch.power());
        let k2b = random_psd(&mut r, t, 0.5 * (1.0 - split) * ch.power());
        let a = sdpc_rates(&ch, &CovariancePair { k_u1: k1.clone(), k_u2: k2a }).unwrap();
        let b = sdpc_rates(&ch, &CovariancePair { k_u1: k1, k_u2: k2b }).unwrap();
        prop_assert_eq!(a.r1.to_bits(), b.r1.to_bits());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn arbitrary_covariances_stay_inside_capacity_region(ch in channel(), seed in any::<u64>()) {
        let region = capacity_region(&ch, &SweepConfig::default()).unwrap();
        let mut r = rng(seed);
        let t = ch.antennas();
        for k in 0..20 {
            let split = k as f64 / 19.0;
            let cov = CovariancePair {
                k_u1: random_psd(&mut r, t, split * ch.power()),
                k_u2: random_psd(&mut r, t, (1.0 - split) * ch.power()),
            };
            let p = sdpc_rates(&ch, &cov).unwrap();
            prop_assert!(region_contains(&region, p, 1e-6), "excess {}", frontier_excess(&region.hull, p));
        }
    }
}
