//! Small dense complex Hermitian linear algebra.
//!
//! Everything here works on exact-size `t × t` matrices with `t` in the
//! single digits, so the routines favour simplicity over blocking: an
//! unpivoted Cholesky factorization, a cyclic complex Jacobi eigensolver, and
//! the Cholesky reduction of a Hermitian-definite pencil `(A, B)` to the
//! standard problem `L⁻¹ A L⁻ᴴ y = λ y`.

use std::fmt;
use std::ops::Index;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm (relative to the full norm) at which a Jacobi
/// sweep is considered converged.
pub const JACOBI_TOLERANCE: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Top two eigenvalues closer than this mark the largest eigenpair as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A column vector in `ℂᵗ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexVector(Vec<Complex64>);

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Self(entries)
    }

    pub fn from_real(entries: &[f64]) -> Self {
        Self(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![ZERO; dim])
    }

    /// The `k`-th standard basis vector.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[k] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|z| z.im == 0.0)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Inner product `selfᴴ other`.
    pub fn dot(&self, other: &Self) -> Result<Complex64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self(self.0.iter().map(|z| z * s).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// Returns the unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    /// Rotates the global phase so the first entry of largest magnitude is
    /// real and non-negative.
    pub fn with_canonical_phase(mut self) -> Self {
        let mut pivot = 0;
        let mut best = -1.0;
        for (i, z) in self.0.iter().enumerate() {
            let m = z.norm();
            if m > best {
                best = m;
                pivot = i;
            }
        }
        if best > 0.0 {
            let rot = self.0[pivot].conj() / best;
            for z in &mut self.0 {
                *z *= rot;
            }
            self.0[pivot] = Complex64::new(best, 0.0);
        }
        self
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl From<Vec<Complex64>> for ComplexVector {
    fn from(v: Vec<Complex64>) -> Self {
        Self(v)
    }
}

/// A `t × t` Hermitian matrix stored densely in row-major order.
///
/// Every constructor leaves the storage exactly conjugate-symmetric with a
/// real diagonal.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl HermitianMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    /// `scale · v vᴴ`.
    pub fn rank_one(scale: f64, v: &ComplexVector) -> Self {
        let dim = v.dim();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let z = v[i] * v[j].conj() * scale;
                m.set_upper(i, j, z);
            }
        }
        m
    }

    /// `I + scale · v vᴴ`, the Gram matrices that make up the channel pencils.
    pub fn identity_plus_rank_one(scale: f64, v: &ComplexVector) -> Self {
        let mut m = Self::rank_one(scale, v);
        for i in 0..m.dim {
            m.data[i * m.dim + i] += ONE;
        }
        m
    }

    /// Builds a matrix from full rows. The input must be Hermitian to within
    /// `1e-12` relative to its Frobenius norm; the stored copy mirrors the
    /// upper triangle so the result is exactly Hermitian.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        for r in rows {
            check_dim(dim, r.len())?;
        }
        if rows.iter().flatten().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("matrix entries"));
        }
        let scale: f64 = rows.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tol = 1e-12 * scale.max(1.0);
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                if (rows[i][j] - rows[j][i].conj()).norm() > tol {
                    return Err(Error::CovarianceInvalid(format!(
                        "entry ({i},{j}) breaks conjugate symmetry"
                    )));
                }
                m.set_upper(i, j, rows[i][j]);
            }
        }
        Ok(m)
    }

    fn set_upper(&mut self, i: usize, j: usize, z: Complex64) {
        let n = self.dim;
        if i == j {
            self.data[i * n + i] = Complex64::new(z.re, 0.0);
        } else {
            self.data[i * n + j] = z;
            self.data[j * n + i] = z.conj();
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.dim.max(1)).map(<[Complex64]>::to_vec).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        check_dim(self.dim, v.dim())?;
        let n = self.dim;
        Ok(ComplexVector::new(
            (0..n).map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum()).collect(),
        ))
    }

    /// Eigenvalues in descending order with matching unit eigenvectors.
    pub fn eigen(&self) -> Eigen {
        jacobi_eigen(self)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigen().values.last().copied().unwrap_or(0.0)
    }
}

/// Lower-triangular Cholesky factor `L` with `L Lᴴ = M`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerTriangular {
    dim: usize,
    data: Vec<Complex64>,
}

impl LowerTriangular {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    /// `L Lᴴ`.
    pub fn reconstruct(&self) -> HermitianMatrix {
        let n = self.dim;
        let mut m = HermitianMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let z: Complex64 = (0..=i).map(|k| self.get(i, k) * self.get(j, k).conj()).sum();
                m.set_upper(i, j, z);
            }
        }
        m
    }

    /// Solves `L x = b`.
    pub fn solve_lower(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        let mut x = b.to_vec();
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= self.get(i, k) * x[k];
            }
            x[i] = s / self.get(i, i);
        }
        x
    }

    /// Solves `Lᴴ x = b`.
    pub fn solve_upper_adjoint(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        let mut x = b.to_vec();
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= self.get(k, i).conj() * x[k];
            }
            x[i] = s / self.get(i, i).re;
        }
        x
    }
}

/// Cholesky factorization of a Hermitian positive definite matrix.
pub fn cholesky(m: &HermitianMatrix) -> Result<LowerTriangular> {
    let n = m.dim();
    let mut l = vec![ZERO; n * n];
    for j in 0..n {
        let mut d = m.get(j, j).re;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if !(d > 0.0) {
            return Err(Error::NotPositiveDefinite { pivot: j, value: d });
        }
        let ljj = d.sqrt();
        l[j * n + j] = Complex64::new(ljj, 0.0);
        for i in j + 1..n {
            let mut s = m.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / ljj;
        }
    }
    Ok(LowerTriangular { dim: n, data: l })
}

/// `vᴴ M w`. When `v` and `w` are the same vector the result is a real
/// quadratic form and the round-off imaginary part is dropped.
pub fn quadratic_form(v: &ComplexVector, m: &HermitianMatrix, w: &ComplexVector) -> Result<Complex64> {
    check_dim(m.dim(), v.dim())?;
    let mw = m.mul_vec(w)?;
    let z = v.dot(&mw)?;
    if std::ptr::eq(v, w) || v == w {
        Ok(Complex64::new(z.re, 0.0))
    } else {
        Ok(z)
    }
}

/// Eigen-decomposition of a Hermitian matrix, largest eigenvalue first.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<ComplexVector>,
}

/// Cyclic Jacobi iteration for a complex Hermitian matrix.
fn jacobi_eigen(m: &HermitianMatrix) -> Eigen {
    let n = m.dim();
    let mut a = m.data.clone();
    let mut v = HermitianMatrix::identity(n).data;
    let total = m.frobenius_norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_TOLERANCE * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                // Phase rotation makes the (p, q) entry real, then a real
                // Jacobi rotation annihilates it. U = D·R with
                // D = diag(1, e^{-iφ}) on the (p, q) plane.
                let phase = apq / mag;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let u_pp = Complex64::new(c, 0.0);
                let u_pq = Complex64::new(s, 0.0);
                let u_qp = -phase.conj() * s;
                let u_qq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * u_pp + akq * u_qp;
                    a[k * n + q] = akp * u_pq + akq * u_qq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[q * n + k] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p] = Complex64::new(a[p * n + p].re, 0.0);
                a[q * n + q] = Complex64::new(a[q * n + q].re, 0.0);

                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * u_pp + vkq * u_qp;
                    v[k * n + q] = vkp * u_pq + vkq * u_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].re.total_cmp(&a[i * n + i].re));
    Eigen {
        values: order.iter().map(|&i| a[i * n + i].re).collect(),
        vectors: order
            .iter()
            .map(|&j| ComplexVector::new((0..n).map(|i| v[i * n + j]).collect()))
            .collect(),
    }
}

/// Closed-form eigenpairs of a 2×2 Hermitian matrix `[[a, b], [b*, d]]`,
/// largest first. Eigenvectors are unit-norm with the canonical phase.
pub fn hermitian_eig_2x2(m: &HermitianMatrix) -> Eigen {
    assert_eq!(m.dim(), 2, "hermitian_eig_2x2 needs a 2x2 matrix");
    let a = m.get(0, 0).re;
    let d = m.get(1, 1).re;
    let b = m.get(0, 1);
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    let values = vec![mean + radius, mean - radius];
    let top = usize::from(d > a);
    let vectors = values
        .iter()
        .enumerate()
        .map(|(k, &lam)| {
            // Pick whichever row of (M - λI) gives the better-conditioned null vector.
            let v1 = ComplexVector::new(vec![b, Complex64::new(lam - a, 0.0)]);
            let v2 = ComplexVector::new(vec![Complex64::new(lam - d, 0.0), b.conj()]);
            let v = if v1.norm() >= v2.norm() { v1 } else { v2 };
            match v.normalized() {
                Some(u) => u.with_canonical_phase(),
                // diagonal with a == d
                None => ComplexVector::basis(2, if k == 0 { top } else { 1 - top }),
            }
        })
        .collect();
    Eigen { values, vectors }
}

/// Largest generalized eigenpair of a Hermitian-definite pencil.
#[derive(Debug, Clone, PartialEq)]
pub struct GenEigResult {
    pub lambda: f64,
    /// Unit-norm eigenvector with the canonical phase.
    pub evec: ComplexVector,
    /// `‖(A − λB) e‖₂`.
    pub residual: f64,
    /// Set when the top two eigenvalues are within [`DEGENERACY_GAP`].
    pub degenerate: bool,
}

/// Largest `λ` with `A e = λ B e`, via `B = L Lᴴ` and the Jacobi
/// eigen-decomposition of `L⁻¹ A L⁻ᴴ`.
pub fn largest_gen_eig(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<GenEigResult> {
    let n = a.dim();
    check_dim(n, b.dim())?;
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::NonFinite("pencil"));
    }
    let l = cholesky(b)?;

    // W = L⁻¹ A (column by column), then C = L⁻¹ Wᴴ = L⁻¹ A L⁻ᴴ.
    let mut w = vec![ZERO; n * n];
    for j in 0..n {
        let col: Vec<Complex64> = (0..n).map(|i| a.get(i, j)).collect();
        for (i, z) in l.solve_lower(&col).into_iter().enumerate() {
            w[i * n + j] = z;
        }
    }
    let mut c = HermitianMatrix::zeros(n);
    let mut full = vec![ZERO; n * n];
    for j in 0..n {
        let col: Vec<Complex64> = (0..n).map(|i| w[j * n + i].conj()).collect();
        for (i, z) in l.solve_lower(&col).into_iter().enumerate() {
            full[i * n + j] = z;
        }
    }
    for i in 0..n {
        for j in i..n {
            c.set_upper(i, j, 0.5 * (full[i * n + j] + full[j * n + i].conj()));
        }
    }

    let eig = c.eigen();
    let lambda = eig.values[0];
    let degenerate = eig.values.len() > 1 && eig.values[0] - eig.values[1] < DEGENERACY_GAP;
    let x = l.solve_upper_adjoint(eig.vectors[0].entries());
    let evec = ComplexVector::new(x)
        .normalized()
        .ok_or(Error::NonFinite("generalized eigenvector"))?
        .with_canonical_phase();

    let ae = a.mul_vec(&evec)?;
    let be = b.mul_vec(&evec)?;
    let residual = ae
        .entries()
        .iter()
        .zip(be.entries())
        .map(|(x, y)| (x - y * lambda).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(GenEigResult { lambda, evec, residual, degenerate })
}

fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}
