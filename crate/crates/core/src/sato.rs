//! Sato-type outer bound.
//!
//! Any coupling of the two receiver noises with correlation `ρ` leaves the
//! secrecy capacity region unchanged, and for a fixed coupling each rate is
//! bounded by a conditional mutual information. For Gaussian inputs with
//! covariance `K_X` the bounds are
//!
//! ```text
//! f₁(ρ, K_X) = min_ν log₂ [(h − νg)ᴴ K_X (h − νg) + 1 + |ν|² − ν*ρ − ρ*ν] / (1 − |ρ|²)
//! f₂(ρ, K_X) = min_μ log₂ [(g − μh)ᴴ K_X (g − μh) + 1 + |μ|² − μ*ρ̄ − ρμ] / (1 − |ρ|²)
//! ```
//!
//! with `ρ = E[Z₁Z₂*]` and received signals `yₖ = (h or g)ᴴx + zₖ`. Seen from
//! receiver 2 the noise correlation is `ρ̄`, hence the conjugate in `f₂`;
//! for real `ρ` the two bounds have the same form.
//!
//! Both minimizations are strictly convex quadratics in `(Re ν, Im ν)` and
//! are solved in closed form. The region is the union over `tr(K_X) ≤ P`
//! of the rectangles `[0, f₁] × [0, f₂]`, for every `|ρ| < 1`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::channel::{rate_scale, spectrum, ChannelPair, ChannelSpectrum};
use crate::error::{Error, Result};
use crate::geometry::{self, RatePair};
use crate::linalg::{quadratic_form, ComplexVector, HermitianMatrix};
use crate::par;
use crate::regions::{capacity_region_with, ParamKind, RateRectangle, RegionBoundary, SweepConfig};
use crate::sdpc::{optimal_covariances_with, validate_psd, COVARIANCE_TOL};

/// `sato_f1`/`sato_f2` reject `|ρ| > 1 − RHO_MARGIN`.
pub const RHO_MARGIN: f64 = 1e-9;

/// Correlations this close to the unit circle are skipped by the audit.
pub const AUDIT_RHO_EXCLUSION: f64 = 1e-6;

/// Tolerance for inner-inside-outer containment.
pub const CONTAINMENT_TOL: f64 = 1e-6;

/// Tolerance for the corner-point tightness gaps.
pub const CORNER_TOL: f64 = 1e-6;

/// Lower limit on tightness gaps (the outer bound must dominate).
pub const GAP_FLOOR: f64 = -1e-9;

/// One evaluation of both bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct SatoEvaluation {
    pub rho: Complex64,
    pub k_x: HermitianMatrix,
    pub f1: f64,
    pub f2: f64,
    pub nu_star: Complex64,
    pub mu_star: Complex64,
}

fn check_rho(rho: Complex64) -> Result<()> {
    let m = rho.norm();
    if !m.is_finite() || m > 1.0 - RHO_MARGIN {
        return Err(Error::RhoOnUnitCircle(m));
    }
    Ok(())
}

fn check_kx(ch: &ChannelPair, k: &HermitianMatrix) -> Result<()> {
    if k.dim() != ch.antennas() {
        return Err(Error::DimensionMismatch { expected: ch.antennas(), actual: k.dim() });
    }
    validate_psd("K_X", k)?;
    if k.trace() > ch.power() + COVARIANCE_TOL {
        return Err(Error::CovarianceInvalid(format!(
            "tr(K_X) = {} exceeds the power budget {}",
            k.trace(),
            ch.power()
        )));
    }
    Ok(())
}

/// `(a − νb)ᴴ K (a − νb) + 1 + |ν|² − ν*ρ − ρ*ν`.
pub fn sato_numerator(
    a: &ComplexVector,
    b: &ComplexVector,
    k: &HermitianMatrix,
    rho: Complex64,
    nu: Complex64,
) -> Result<f64> {
    let d = a.sub(&b.scaled(nu))?;
    let psi = 1.0 + nu.norm_sqr() - 2.0 * (nu.conj() * rho).re;
    Ok(quadratic_form(&d, k, &d)?.re + psi)
}

/// Minimizes the bound for receiver `a` given side information from `b`.
/// Returns `(log₂ ratio, minimizer)` in complex-field units.
fn min_bound(a: &ComplexVector, b: &ComplexVector, k: &HermitianMatrix, rho: Complex64) -> Result<(f64, Complex64)> {
    let cross = quadratic_form(b, k, a)?;
    let bkb = quadratic_form(b, k, b)?.re;
    let nu = (cross + rho) / (bkb + 1.0);
    let value = sato_numerator(a, b, k, rho, nu)? / (1.0 - rho.norm_sqr());
    Ok((value.log2().max(0.0), nu))
}

/// `f₁(ρ, K_X)` scaled for reporting, and the minimizing
/// `ν* = (gᴴK_Xh + ρ)/(gᴴK_Xg + 1)`.
pub fn sato_f1(ch: &ChannelPair, rho: Complex64, k_x: &HermitianMatrix) -> Result<(f64, Complex64)> {
    check_rho(rho)?;
    check_kx(ch, k_x)?;
    let (f, nu) = min_bound(ch.h(), ch.g(), k_x, rho)?;
    Ok((rate_scale(ch) * f, nu))
}

/// `f₂(ρ, K_X)` scaled for reporting, and the minimizing
/// `μ* = (hᴴK_Xg + ρ̄)/(hᴴK_Xh + 1)`.
pub fn sato_f2(ch: &ChannelPair, rho: Complex64, k_x: &HermitianMatrix) -> Result<(f64, Complex64)> {
    check_rho(rho)?;
    check_kx(ch, k_x)?;
    let (f, mu) = min_bound(ch.g(), ch.h(), k_x, rho.conj())?;
    Ok((rate_scale(ch) * f, mu))
}

pub fn sato_evaluate(ch: &ChannelPair, rho: Complex64, k_x: &HermitianMatrix) -> Result<SatoEvaluation> {
    let (f1, nu_star) = sato_f1(ch, rho, k_x)?;
    let (f2, mu_star) = sato_f2(ch, rho, k_x)?;
    Ok(SatoEvaluation { rho, k_x: k_x.clone(), f1, f2, nu_star, mu_star })
}

/// `ρ* = (gᴴe₁)/(hᴴe₁)`, the correlation at which the outer bound meets the
/// S-DPC boundary.
pub fn tightness_rho(spec: &ChannelSpectrum, h: &ComplexVector, g: &ComplexVector) -> Result<Complex64> {
    let a = h.dot(&spec.e1)?;
    if a.norm() <= 1e-12 {
        return Err(Error::DegeneratePivot(a.norm()));
    }
    Ok(g.dot(&spec.e1)? / a)
}

/// Covariance family searched by [`outer_region`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovSearchConfig {
    /// Two antennas: polar angles of `u = [cos θ, sin θ·e^{iφ}]` on `[0, π/2]`.
    pub angles: usize,
    /// Two antennas: phases `φ` on `[0, 2π)`.
    pub phases: usize,
    /// More antennas: number of pseudo-random unit directions.
    pub random_vectors: usize,
    pub seed: u64,
    /// Rank-one powers `P·k/power_levels` for `k = 1..=power_levels`.
    pub power_levels: usize,
    /// Power splits whose S-DPC transmit covariance joins the family.
    pub sdpc_alphas: Vec<f64>,
}

impl Default for CovSearchConfig {
    fn default() -> Self {
        Self {
            angles: 256,
            phases: 64,
            random_vectors: 4096,
            seed: 0x5a70,
            power_levels: 8,
            sdpc_alphas: SweepConfig::default().uniform_params(),
        }
    }
}

impl CovSearchConfig {
    /// A smaller family for repeated audits.
    pub fn coarse() -> Self {
        Self { angles: 48, phases: 16, random_vectors: 512, power_levels: 4, ..Self::default() }
    }
}

/// Precomputed covariance family: rank-one directions (as their projections
/// onto `h` and `g`) plus explicit S-DPC covariances.
#[derive(Debug, Clone)]
pub struct CovFamily {
    /// `(hᴴu, gᴴu)` per unit direction `u`.
    probes: Vec<(Complex64, Complex64)>,
    powers: Vec<f64>,
    sdpc: Vec<(f64, HermitianMatrix)>,
}

impl CovFamily {
    pub fn build(ch: &ChannelPair, spec: &ChannelSpectrum, cfg: &CovSearchConfig) -> Result<Self> {
        if ch.power() == 0.0 {
            return Ok(Self { probes: Vec::new(), powers: Vec::new(), sdpc: Vec::new() });
        }
        let t = ch.antennas();
        let dirs: Vec<ComplexVector> = if t == 2 {
            let na = cfg.angles.max(1);
            let np = cfg.phases.max(1);
            let mut v = Vec::with_capacity(na * np);
            for i in 0..na {
                let theta = if na == 1 { 0.0 } else { std::f64::consts::FRAC_PI_2 * i as f64 / (na - 1) as f64 };
                for j in 0..np {
                    let phi = std::f64::consts::TAU * j as f64 / np as f64;
                    v.push(ComplexVector::new(vec![
                        Complex64::new(theta.cos(), 0.0),
                        Complex64::from_polar(theta.sin(), phi),
                    ]));
                }
            }
            v
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..cfg.random_vectors)
                .filter_map(|_| {
                    let z: Vec<Complex64> = (0..t)
                        .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
                        .collect();
                    ComplexVector::new(z).normalized()
                })
                .collect()
        };
        let probes = dirs
            .iter()
            .map(|u| Ok((ch.h().dot(u)?, ch.g().dot(u)?)))
            .collect::<Result<Vec<_>>>()?;
        let levels = cfg.power_levels.max(1);
        let powers = (1..=levels).map(|k| ch.power() * k as f64 / levels as f64).collect();
        let sdpc = cfg
            .sdpc_alphas
            .iter()
            .map(|&a| Ok((a, optimal_covariances_with(ch, spec, a)?.total()?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { probes, powers, sdpc })
    }

    pub fn len(&self) -> usize {
        self.probes.len() * self.powers.len() + self.sdpc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Closed-form minimum for `K = p·uuᴴ` with `x = hᴴu`, `y = gᴴu`.
fn rank_one_bounds(p: f64, x: Complex64, y: Complex64, rho: Complex64) -> (f64, f64) {
    let hkh = p * x.norm_sqr();
    let gkg = p * y.norm_sqr();
    let gkh = y * x.conj() * p;
    let denom = 1.0 - rho.norm_sqr();
    let n1 = hkh + 1.0 - (gkh + rho).norm_sqr() / (gkg + 1.0);
    // |hᴴKg + ρ̄| = |gᴴKh + ρ|
    let n2 = gkg + 1.0 - (gkh + rho).norm_sqr() / (hkh + 1.0);
    ((n1 / denom).log2().max(0.0), (n2 / denom).log2().max(0.0))
}

/// Frontier of the (convexified) union of outer-bound rectangles for one `ρ`.
pub fn outer_region(ch: &ChannelPair, rho: Complex64, cfg: &CovSearchConfig) -> Result<RegionBoundary> {
    let spec = spectrum(ch)?;
    outer_region_with(ch, rho, &CovFamily::build(ch, &spec, cfg)?)
}

pub fn outer_region_with(ch: &ChannelPair, rho: Complex64, family: &CovFamily) -> Result<RegionBoundary> {
    check_rho(rho)?;
    let s = rate_scale(ch);
    let mut corners = Vec::with_capacity(family.len());
    for &(x, y) in &family.probes {
        for &p in &family.powers {
            let (f1, f2) = rank_one_bounds(p, x, y, rho);
            corners.push(RatePair::new(s * f1, s * f2));
        }
    }
    let mut points = Vec::with_capacity(family.sdpc.len());
    for (alpha, k) in &family.sdpc {
        let (f1, _) = min_bound(ch.h(), ch.g(), k, rho)?;
        let (f2, _) = min_bound(ch.g(), ch.h(), k, rho.conj())?;
        let corner = RatePair::new(s * f1, s * f2);
        corners.push(corner);
        points.push(RateRectangle { corner, param: *alpha, param_kind: ParamKind::Alpha });
    }
    Ok(RegionBoundary { kind: ParamKind::Covariance, points, hull: geometry::pareto_hull(&corners), union_gap: None })
}

/// Settings for [`audit_inner_outer`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    pub sweep: SweepConfig,
    pub search: CovSearchConfig,
    /// Radii `k·radius_step` of the polar ρ grid.
    pub radius_step: f64,
    /// Number of angles on each ρ circle.
    pub angle_steps: usize,
    /// Multiplies the inner region before the containment check. Anything
    /// other than 1 injects a fault; used to exercise the failure path.
    pub inner_inflation: f64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            sweep: SweepConfig::default(),
            search: CovSearchConfig::default(),
            radius_step: 0.1,
            angle_steps: 16,
            inner_inflation: 1.0,
        }
    }
}

/// ρ values on the polar grid, excluding the neighbourhood of the unit circle.
pub fn rho_grid(radius_step: f64, angle_steps: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0)];
    if !(radius_step > 0.0) {
        return out;
    }
    let mut k = 1;
    loop {
        let r = radius_step * k as f64;
        if r > 1.0 - AUDIT_RHO_EXCLUSION {
            break;
        }
        for j in 0..angle_steps.max(1) {
            out.push(Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / angle_steps.max(1) as f64));
        }
        k += 1;
    }
    out
}

/// Outer-minus-inner gaps at the two ends of the α sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornerGaps {
    pub alpha0_f1: f64,
    pub alpha0_f2: f64,
    pub alpha1_f1: f64,
    pub alpha1_f2: f64,
}

impl CornerGaps {
    pub fn max_abs(&self) -> f64 {
        [self.alpha0_f1, self.alpha0_f2, self.alpha1_f1, self.alpha1_f2].iter().map(|g| g.abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    /// Every inner hull vertex lies in the outer region for every grid ρ.
    pub containment_ok: bool,
    /// Smallest `f₁ − r₁(α)` over the α sweep at `ρ*` (reporting units).
    pub min_gap_f1: Option<f64>,
    pub min_gap_f2: Option<f64>,
    pub rho_star: Option<[f64; 2]>,
    pub corner_gaps: Option<CornerGaps>,
    /// Largest gap over interior α (reported, not asserted).
    pub max_interior_gap: Option<f64>,
    /// Gaps are all above [`GAP_FLOOR`].
    pub tightness_ok: bool,
    pub worst_excess: f64,
    pub worst_rho: [f64; 2],
    pub rho_grid_points: usize,
    pub inner_hull_points: usize,
    pub family_size: usize,
    pub union_gap: Option<f64>,
    pub containment_tol: f64,
    pub corner_tol: f64,
    pub notes: Vec<String>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.containment_ok && self.corner_gaps.map_or(true, |c| c.max_abs() <= self.corner_tol)
    }
}

/// Checks the inner region against the outer bound: containment over a
/// polar ρ grid, and tightness at `ρ*` along the S-DPC covariances.
pub fn audit_inner_outer(ch: &ChannelPair, cfg: &AuditConfig) -> Result<AuditReport> {
    let spec = spectrum(ch)?;
    let inner = capacity_region_with(ch, &spec, &cfg.sweep)?;
    let inner_points: Vec<RatePair> = inner.hull.iter().map(|p| p.scaled(cfg.inner_inflation)).collect();

    let search = CovSearchConfig { sdpc_alphas: inner.params(), ..cfg.search.clone() };
    let family = CovFamily::build(ch, &spec, &search)?;
    let grid = rho_grid(cfg.radius_step, cfg.angle_steps);

    let excesses = par::map_ordered(&grid, |&rho| -> Result<f64> {
        let outer = outer_region_with(ch, rho, &family)?;
        let (by_r1, by_r2) = geometry::axis_tables(&outer.hull);
        Ok(inner_points.iter().map(|&q| geometry::axis_excess_prepared(&by_r1, &by_r2, q)).fold(0.0, f64::max))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (worst_idx, worst_excess) =
        excesses.iter().copied().enumerate().fold((0, 0.0), |acc, (i, e)| if e > acc.1 { (i, e) } else { acc });
    let worst_rho = grid[worst_idx];

    let mut notes = Vec::new();
    let mut report = AuditReport {
        containment_ok: worst_excess <= CONTAINMENT_TOL,
        min_gap_f1: None,
        min_gap_f2: None,
        rho_star: None,
        corner_gaps: None,
        max_interior_gap: None,
        tightness_ok: true,
        worst_excess,
        worst_rho: [worst_rho.re, worst_rho.im],
        rho_grid_points: grid.len(),
        inner_hull_points: inner_points.len(),
        family_size: family.len(),
        union_gap: inner.union_gap,
        containment_tol: CONTAINMENT_TOL,
        corner_tol: CORNER_TOL,
        notes: Vec::new(),
    };

    match tightness_rho(&spec, ch.h(), ch.g()) {
        Err(Error::DegeneratePivot(m)) => {
            notes.push(format!("rho* undefined (|h^H e1| = {m:e}); containment grid only"));
        }
        Err(e) => return Err(e),
        Ok(rho) => {
            report.rho_star = Some([rho.re, rho.im]);
            if rho.norm() > 1.0 + 1e-9 {
                notes.push(format!("|rho*| = {} exceeds 1; tightness skipped", rho.norm()));
            } else if rho.norm() > 1.0 - AUDIT_RHO_EXCLUSION {
                notes.push("rho* is on the unit circle (degenerate channel); tightness skipped".into());
            } else {
                tightness(ch, &spec, &inner, rho, &mut report)?;
            }
        }
    }
    report.notes = notes;
    Ok(report)
}

fn tightness(
    ch: &ChannelPair,
    spec: &ChannelSpectrum,
    inner: &RegionBoundary,
    rho: Complex64,
    report: &mut AuditReport,
) -> Result<()> {
    let s = rate_scale(ch);
    let gaps = inner
        .points
        .iter()
        .map(|pt| {
            let k = optimal_covariances_with(ch, spec, pt.param)?.total()?;
            let (f1, _) = min_bound(ch.h(), ch.g(), &k, rho)?;
            let (f2, _) = min_bound(ch.g(), ch.h(), &k, rho.conj())?;
            Ok((pt.param, s * f1 - pt.corner.r1, s * f2 - pt.corner.r2))
        })
        .collect::<Result<Vec<_>>>()?;
    let min1 = gaps.iter().map(|g| g.1).fold(f64::INFINITY, f64::min);
    let min2 = gaps.iter().map(|g| g.2).fold(f64::INFINITY, f64::min);
    let interior = gaps
        .iter()
        .filter(|g| g.0 > 0.0 && g.0 < 1.0)
        .map(|g| g.1.abs().max(g.2.abs()))
        .fold(0.0, f64::max);
    let at = |alpha: f64| gaps.iter().find(|g| g.0 == alpha).copied();
    if let (Some(a0), Some(a1)) = (at(0.0), at(1.0)) {
        report.corner_gaps = Some(CornerGaps { alpha0_f1: a0.1, alpha0_f2: a0.2, alpha1_f1: a1.1, alpha1_f2: a1.2 });
    }
    report.min_gap_f1 = Some(min1);
    report.min_gap_f2 = Some(min2);
    report.max_interior_gap = Some(interior);
    report.tightness_ok = min1 >= GAP_FLOOR && min2 >= GAP_FLOOR;
    Ok(())
}
