//! Independent reference computations and random instance generators.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use secrecy_region::linalg::{ComplexVector, HermitianMatrix};
use secrecy_region::{ChannelPair, FieldMode};

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vector(rng: &mut ChaCha8Rng, t: usize) -> Vec<C> {
    (0..t).map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect()
}

/// Complex channel with Gaussian entries, `t ∈ {2, 3}`, `P ∈ {0.1, 1, 10}`.
pub fn random_channel(rng: &mut ChaCha8Rng) -> ChannelPair {
    let t = rng.gen_range(2..=3);
    random_channel_t(rng, t)
}

pub fn random_channel_t(rng: &mut ChaCha8Rng, t: usize) -> ChannelPair {
    let p = [0.1, 1.0, 10.0][rng.gen_range(0..3)];
    let h = gaussian_vector(rng, t);
    let g = gaussian_vector(rng, t);
    ChannelPair::new(ComplexVector::new(h), ComplexVector::new(g), p, FieldMode::Complex).unwrap()
}

/// Random PSD matrix with trace `trace`.
pub fn random_psd(rng: &mut ChaCha8Rng, t: usize, trace: f64) -> HermitianMatrix {
    let mut m = HermitianMatrix::zeros(t);
    for _ in 0..t {
        let v = ComplexVector::new(gaussian_vector(rng, t));
        m = m.add(&HermitianMatrix::rank_one(rng.gen_range(0.0..1.0), &v)).unwrap();
    }
    let tr = m.trace();
    m.scaled(trace / tr)
}

fn dot(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C]) -> f64 {
    dot(a, a).re.sqrt()
}

/// `vᴴ M w` by explicit double sum.
pub fn qf(v: &[C], m: &HermitianMatrix, w: &[C]) -> C {
    let mut s = c(0.0, 0.0);
    for i in 0..v.len() {
        for j in 0..w.len() {
            s += v[i].conj() * m.get(i, j) * w[j];
        }
    }
    s
}

/// Largest eigenvalue and a unit eigenvector of the pencil
/// `(I + uuᴴ, I + vvᴴ)`, from the restriction to `span{u, v}` solved by the
/// quadratic formula. Outside that span both matrices act as the identity,
/// so the top eigenvalue is at least 1.
pub fn rank_one_pencil_top(u: &[C], v: &[C]) -> (f64, Vec<C>) {
    let t = u.len();
    // Orthonormal basis q1, q2 of span{u, v}, padded with a coordinate
    // vector when the span is one-dimensional.
    let mut basis: Vec<Vec<C>> = Vec::new();
    for cand in [u.to_vec(), v.to_vec()].into_iter().chain((0..t).map(|k| {
        let mut e = vec![c(0.0, 0.0); t];
        e[k] = c(1.0, 0.0);
        e
    })) {
        let mut w = cand;
        for q in &basis {
            let p = dot(q, &w);
            for (wi, qi) in w.iter_mut().zip(q) {
                *wi -= p * qi;
            }
        }
        let n = norm(&w);
        if n > 1e-10 * (1.0 + norm(u) + norm(v)) {
            basis.push(w.iter().map(|x| x / n).collect());
        }
        if basis.len() == 2 {
            break;
        }
    }
    let (q1, q2) = (&basis[0], &basis[1]);
    let uc = [dot(q1, u), dot(q2, u)];
    let vc = [dot(q1, v), dot(q2, v)];
    let a = |i: usize, j: usize| (if i == j { 1.0 } else { 0.0 }) + uc[i] * uc[j].conj();
    let b = |i: usize, j: usize| (if i == j { 1.0 } else { 0.0 }) + vc[i] * vc[j].conj();
    // det(A − λB) = qa λ² + qb λ + qc
    let qa = (b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0)).re;
    let qb = -(a(0, 0) * b(1, 1) + a(1, 1) * b(0, 0) - a(0, 1) * b(1, 0) - a(1, 0) * b(0, 1)).re;
    let qc = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)).re;
    let disc = (qb * qb - 4.0 * qa * qc).max(0.0);
    let lam = (-qb + disc.sqrt()) / (2.0 * qa);
    // Null vector of the 2×2 matrix A − λB.
    let m = |i: usize, j: usize| a(i, j) - b(i, j) * lam;
    let y = if m(0, 0).norm() + m(0, 1).norm() >= m(1, 0).norm() + m(1, 1).norm() {
        [-m(0, 1), m(0, 0)]
    } else {
        [m(1, 1), -m(1, 0)]
    };
    let mut e: Vec<C> = (0..t).map(|k| y[0] * q1[k] + y[1] * q2[k]).collect();
    let n = norm(&e);
    if n < 1e-300 {
        e = q1.clone();
    } else {
        e.iter_mut().for_each(|x| *x /= n);
    }
    (lam.max(1.0), e)
}

fn scaled(v: &[C], s: f64) -> Vec<C> {
    v.iter().map(|x| x * s).collect()
}

/// `(λ₁, e₁, λ₂, e₂)` of the channel by the subspace oracle.
pub fn spectrum_oracle(h: &[C], g: &[C], p: f64) -> (f64, Vec<C>, f64, Vec<C>) {
    let s = p.sqrt();
    let (l1, e1) = rank_one_pencil_top(&scaled(h, s), &scaled(g, s));
    let (l2, e2) = rank_one_pencil_top(&scaled(g, s), &scaled(h, s));
    (l1, e1, l2, e2)
}

/// `γ₁(α)` and `γ₂(α)` expanded from scalars `|hᴴe₁|²`, `|gᴴe₁|²` and the
/// rank-one-pencil oracle.
pub fn gamma_oracle(h: &[C], g: &[C], p: f64, alpha: f64) -> (f64, f64) {
    let (_, e1, _, _) = spectrum_oracle(h, g, p);
    let a = dot(h, &e1).norm_sqr();
    let b = dot(g, &e1).norm_sqr();
    let g1 = (1.0 + alpha * p * a) / (1.0 + alpha * p * b);
    let rest = (1.0 - alpha) * p;
    let u = scaled(g, (rest / (1.0 + alpha * p * b)).sqrt());
    let v = scaled(h, (rest / (1.0 + alpha * p * a)).sqrt());
    (g1, rank_one_pencil_top(&u, &v).0)
}

/// The outer-bound objective `(a − νb)ᴴK(a − νb) + 1 + |ν|² − 2Re(ν̄ρ)`,
/// divided by `1 − |ρ|²`, in log₂.
pub fn sato_objective(a: &[C], b: &[C], k: &HermitianMatrix, rho: C, nu: C) -> f64 {
    let d: Vec<C> = a.iter().zip(b).map(|(x, y)| x - nu * y).collect();
    let num = qf(&d, k, &d).re + 1.0 + nu.norm_sqr() - 2.0 * (nu.conj() * rho).re;
    (num / (1.0 - rho.norm_sqr())).log2()
}

/// Minimum of [`sato_objective`] over `ν ∈ [−3, 3]²` by a 201×201 grid,
/// zoomed twice around the best cell. Returns `(value, argmin)`.
pub fn sato_grid_min(a: &[C], b: &[C], k: &HermitianMatrix, rho: C) -> (f64, C) {
    let n = 201;
    let mut centre = c(0.0, 0.0);
    let mut half = 3.0;
    let mut best = (f64::INFINITY, centre);
    for _ in 0..3 {
        let step = 2.0 * half / (n - 1) as f64;
        for i in 0..n {
            for j in 0..n {
                let nu = centre + c(-half + step * i as f64, -half + step * j as f64);
                let f = sato_objective(a, b, k, rho, nu);
                if f < best.0 {
                    best = (f, nu);
                }
            }
        }
        centre = best.1;
        half = 2.0 * step;
    }
    best
}
