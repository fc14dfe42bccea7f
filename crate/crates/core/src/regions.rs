//! The secrecy capacity region as a sweep of rate rectangles.
//!
//! For each power split `α ∈ [0, 1]` the rectangle corner is
//! `(log₂ γ₁(α), log₂ γ₂(α))`, where `γ₁` is a closed-form ratio along `e₁`
//! and `γ₂` is the top eigenvalue of a residual pencil. The region is the
//! convex hull of the union of those rectangles. The mirrored `β`
//! parametrization exchanges the roles of `(h, e₁)` and `(g, e₂)` and must
//! describe the same set.

use serde::{Deserialize, Serialize};

use crate::channel::{rate_scale, spectrum, ChannelPair, ChannelSpectrum};
use crate::error::{Error, Result};
use crate::geometry::{self, RatePair};
use crate::linalg::{largest_gen_eig, ComplexVector, GenEigResult, HermitianMatrix};
use crate::par;

/// How the α (or β) axis is sampled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Uniform grid points on `[0, 1]`, endpoints included.
    pub grid: usize,
    /// Weights `w` for which the maximizer of `r1 + w·r2` is refined by
    /// golden-section search between its grid neighbours.
    pub refine_weights: Vec<f64>,
    pub refine_iters: usize,
    pub refine_tol: f64,
    /// Grid intervals are bisected while the midpoint corner lies further
    /// than this from the chord between the end corners (bits).
    pub sag_tol: f64,
    /// Maximum bisection depth per grid interval; 0 disables bisection.
    pub max_depth: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            grid: 512,
            refine_weights: vec![0.5, 1.0, 2.0],
            refine_iters: 30,
            refine_tol: 1e-10,
            sag_tol: 1e-7,
            max_depth: 16,
        }
    }
}

impl SweepConfig {
    pub fn uniform(grid: usize) -> Self {
        Self { grid, refine_weights: Vec::new(), max_depth: 0, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid < 2 {
            return Err(Error::InvalidSweep(format!("grid needs at least 2 points, got {}", self.grid)));
        }
        if self.refine_weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidSweep("refinement weights must be finite and >= 0".into()));
        }
        if !(self.sag_tol.is_finite() && self.sag_tol > 0.0) {
            return Err(Error::InvalidSweep(format!("sag_tol must be finite and > 0, got {}", self.sag_tol)));
        }
        Ok(())
    }

    pub fn uniform_params(&self) -> Vec<f64> {
        let n = self.grid;
        (0..n).map(|k| if k + 1 == n { 1.0 } else { k as f64 / (n - 1) as f64 }).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamKind {
    Alpha,
    Beta,
    /// Fraction of time given to user 1's single-user operating point.
    TimeSharing,
    /// Index into an outer-bound covariance family.
    Covariance,
}

/// One swept rectangle `[0, r1] × [0, r2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateRectangle {
    pub corner: RatePair,
    pub param: f64,
    pub param_kind: ParamKind,
}

/// Swept rectangle corners plus the Pareto frontier of their convex hull.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionBoundary {
    pub kind: ParamKind,
    /// Corners in increasing parameter order.
    pub points: Vec<RateRectangle>,
    /// Frontier of the convex hull, `r1` ascending.
    pub hull: Vec<RatePair>,
    /// Largest distance from the hull boundary to the plain union of the
    /// rectangles (0 when the union is already convex). Not computed for
    /// outer regions.
    pub union_gap: Option<f64>,
}

impl RegionBoundary {
    fn build(kind: ParamKind, points: Vec<RateRectangle>, extra: &[RatePair]) -> Self {
        let mut corners: Vec<RatePair> = points.iter().map(|p| p.corner).collect();
        corners.extend_from_slice(extra);
        let hull = geometry::pareto_hull(&corners);
        let union_gap = Some(geometry::hull_union_gap(&hull, &corners));
        Self { kind, points, hull, union_gap }
    }

    /// Right end of the frontier on the `r1` axis.
    pub fn r1_intercept(&self) -> f64 {
        self.hull.last().map_or(0.0, |p| p.r1)
    }

    /// Top end of the frontier on the `r2` axis.
    pub fn r2_intercept(&self) -> f64 {
        self.hull.first().map_or(0.0, |p| p.r2)
    }

    pub fn contains(&self, p: RatePair, tol: f64) -> bool {
        geometry::frontier_contains(&self.hull, p, tol)
    }

    pub fn params(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.param).collect()
    }
}

/// True iff `p` is dominated by the hull of `boundary` within `tol`.
pub fn region_contains(boundary: &RegionBoundary, p: RatePair, tol: f64) -> bool {
    boundary.contains(p, tol)
}

fn check_param(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange { name, value })
    }
}

/// `(1 + tP|ownᴴe|²) / (1 + tP|otherᴴe|²)`.
fn split_ratio(power: f64, t: f64, own: &ComplexVector, other: &ComplexVector, e: &ComplexVector) -> Result<f64> {
    let num = 1.0 + t * power * own.dot(e)?.norm_sqr();
    let den = 1.0 + t * power * other.dot(e)?.norm_sqr();
    Ok(num / den)
}

/// Top eigenpair of
/// `(I + (1−t)P own ownᴴ / (1 + tP|ownᴴe|²), I + (1−t)P other otherᴴ / (1 + tP|otherᴴe|²))`.
fn residual_pencil(
    power: f64,
    t: f64,
    own: &ComplexVector,
    other: &ComplexVector,
    e: &ComplexVector,
) -> Result<GenEigResult> {
    let a_scale = (1.0 - t) * power / (1.0 + t * power * own.dot(e)?.norm_sqr());
    let b_scale = (1.0 - t) * power / (1.0 + t * power * other.dot(e)?.norm_sqr());
    largest_gen_eig(
        &HermitianMatrix::identity_plus_rank_one(a_scale, own),
        &HermitianMatrix::identity_plus_rank_one(b_scale, other),
    )
}

/// `γ₁(α) = (1 + αP|hᴴe₁|²) / (1 + αP|gᴴe₁|²)`.
pub fn gamma1(ch: &ChannelPair, spec: &ChannelSpectrum, alpha: f64) -> Result<f64> {
    check_param("alpha", alpha)?;
    split_ratio(ch.power(), alpha, ch.h(), ch.g(), &spec.e1)
}

/// `γ₂(α)` and its unit eigenvector `c₂(α)`: the top generalized eigenpair
/// of the pencil left for user 2 after a fraction `α` of the power has gone
/// to user 1 along `e₁`.
pub fn gamma2(ch: &ChannelPair, spec: &ChannelSpectrum, alpha: f64) -> Result<(f64, ComplexVector)> {
    let r = gamma2_full(ch, spec, alpha)?;
    Ok((r.lambda, r.evec))
}

pub(crate) fn gamma2_full(ch: &ChannelPair, spec: &ChannelSpectrum, alpha: f64) -> Result<GenEigResult> {
    check_param("alpha", alpha)?;
    residual_pencil(ch.power(), alpha, ch.g(), ch.h(), &spec.e1)
}

/// `ξ₁(β)`: top eigenvalue of the residual pencil for user 1 after a
/// fraction `β` of the power has gone to user 2 along `e₂`.
pub fn xi1(ch: &ChannelPair, spec: &ChannelSpectrum, beta: f64) -> Result<f64> {
    check_param("beta", beta)?;
    Ok(residual_pencil(ch.power(), beta, ch.h(), ch.g(), &spec.e2)?.lambda)
}

/// `ξ₂(β) = (1 + βP|gᴴe₂|²) / (1 + βP|hᴴe₂|²)`.
pub fn xi2(ch: &ChannelPair, spec: &ChannelSpectrum, beta: f64) -> Result<f64> {
    check_param("beta", beta)?;
    split_ratio(ch.power(), beta, ch.g(), ch.h(), &spec.e2)
}

/// Axis intercepts `(scale·log₂λ₁, scale·log₂λ₂)`.
pub fn max_rates(ch: &ChannelPair) -> Result<RatePair> {
    Ok(max_rates_from(ch, &spectrum(ch)?))
}

pub fn max_rates_from(ch: &ChannelPair, spec: &ChannelSpectrum) -> RatePair {
    let s = rate_scale(ch);
    RatePair::new(s * spec.lambda1.log2().max(0.0), s * spec.lambda2.log2().max(0.0))
}

/// Secrecy capacity of the wiretap channel in which user 2 only eavesdrops.
pub fn miso_wiretap_capacity(ch: &ChannelPair) -> Result<f64> {
    Ok(max_rates(ch)?.r1)
}

/// The rectangle corner for one α, clamped at the axis intercepts (which
/// bound every corner of the region).
fn alpha_corner(ch: &ChannelPair, spec: &ChannelSpectrum, caps: RatePair, alpha: f64) -> Result<RatePair> {
    let s = rate_scale(ch);
    let g1 = gamma1(ch, spec, alpha)?;
    let g2 = gamma2_full(ch, spec, alpha)?.lambda;
    Ok(RatePair::new(
        (s * g1.log2()).clamp(0.0, caps.r1),
        (s * g2.log2()).clamp(0.0, caps.r2),
    ))
}

fn beta_corner(ch: &ChannelPair, spec: &ChannelSpectrum, caps: RatePair, beta: f64) -> Result<RatePair> {
    let s = rate_scale(ch);
    let x1 = xi1(ch, spec, beta)?;
    let x2 = xi2(ch, spec, beta)?;
    Ok(RatePair::new(
        (s * x1.log2()).clamp(0.0, caps.r1),
        (s * x2.log2()).clamp(0.0, caps.r2),
    ))
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Uniform sweep followed by golden-section refinement around the maximizer
/// of `r1 + w·r2` for each configured weight.
fn sweep<F>(cfg: &SweepConfig, corner: F) -> Result<Vec<(f64, RatePair)>>
where
    F: Fn(f64) -> Result<RatePair> + Sync + Send,
{
    cfg.validate()?;
    let params = cfg.uniform_params();
    let corners = par::map_ordered(&params, |&t| corner(t)).into_iter().collect::<Result<Vec<_>>>()?;
    let mut points: Vec<(f64, RatePair)> = params.into_iter().zip(corners).collect();

    if cfg.max_depth > 0 {
        let intervals: Vec<_> = points.windows(2).map(|w| (w[0], w[1])).collect();
        let inserted = par::map_ordered(&intervals, |&(a, b)| {
            let mut out = Vec::new();
            bisect(&corner, a, b, cfg.sag_tol, cfg.max_depth, &mut out).map(|_| out)
        });
        for batch in inserted {
            points.extend(batch?);
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
    }

    let mut extra = Vec::new();
    for &w in &cfg.refine_weights {
        let score = |p: RatePair| p.r1 + w * p.r2;
        let best = (0..points.len())
            .max_by(|&i, &j| score(points[i].1).total_cmp(&score(points[j].1)))
            .unwrap_or(0);
        let mut lo = points[best.saturating_sub(1)].0;
        let mut hi = points[(best + 1).min(points.len() - 1)].0;
        let mut x1 = hi - INV_PHI * (hi - lo);
        let mut x2 = lo + INV_PHI * (hi - lo);
        let mut c1 = corner(x1)?;
        let mut c2 = corner(x2)?;
        extra.push((x1, c1));
        extra.push((x2, c2));
        for _ in 0..cfg.refine_iters {
            if hi - lo <= cfg.refine_tol {
                break;
            }
            if score(c1) >= score(c2) {
                hi = x2;
                x2 = x1;
                c2 = c1;
                x1 = hi - INV_PHI * (hi - lo);
                c1 = corner(x1)?;
                extra.push((x1, c1));
            } else {
                lo = x1;
                x1 = x2;
                c1 = c2;
                x2 = lo + INV_PHI * (hi - lo);
                c2 = corner(x2)?;
                extra.push((x2, c2));
            }
        }
    }
    points.extend(extra);
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    points.dedup_by(|a, b| a.0 == b.0);
    Ok(points)
}

/// Recursively splits `[a, b]` while the midpoint corner sags off the chord.
fn bisect<F>(corner: &F, a: (f64, RatePair), b: (f64, RatePair), tol: f64, depth: usize, out: &mut Vec<(f64, RatePair)>) -> Result<()>
where
    F: Fn(f64) -> Result<RatePair>,
{
    if depth == 0 {
        return Ok(());
    }
    let t = 0.5 * (a.0 + b.0);
    if t <= a.0 || t >= b.0 {
        return Ok(());
    }
    let m = (t, corner(t)?);
    out.push(m);
    if geometry::point_segment_distance(m.1, a.1, b.1) > tol {
        bisect(corner, a, m, tol, depth - 1, out)?;
        bisect(corner, m, b, tol, depth - 1, out)?;
    }
    Ok(())
}

fn rectangles(kind: ParamKind, points: Vec<(f64, RatePair)>) -> Vec<RateRectangle> {
    points.into_iter().map(|(param, corner)| RateRectangle { corner, param, param_kind: kind }).collect()
}

/// The capacity region through the α parametrization.
pub fn capacity_region(ch: &ChannelPair, cfg: &SweepConfig) -> Result<RegionBoundary> {
    let spec = spectrum(ch)?;
    capacity_region_with(ch, &spec, cfg)
}

pub fn capacity_region_with(ch: &ChannelPair, spec: &ChannelSpectrum, cfg: &SweepConfig) -> Result<RegionBoundary> {
    let caps = max_rates_from(ch, spec);
    let points = sweep(cfg, |a| alpha_corner(ch, spec, caps, a))?;
    Ok(RegionBoundary::build(ParamKind::Alpha, rectangles(ParamKind::Alpha, points), &axis_points(caps)))
}

/// The same region through the mirrored β parametrization.
pub fn capacity_region_beta(ch: &ChannelPair, cfg: &SweepConfig) -> Result<RegionBoundary> {
    let spec = spectrum(ch)?;
    let caps = max_rates_from(ch, &spec);
    let points = sweep(cfg, |b| beta_corner(ch, &spec, caps, b))?;
    Ok(RegionBoundary::build(ParamKind::Beta, rectangles(ParamKind::Beta, points), &axis_points(caps)))
}

fn axis_points(caps: RatePair) -> [RatePair; 2] {
    [RatePair::new(caps.r1, 0.0), RatePair::new(0.0, caps.r2)]
}

/// Time sharing between the two single-user secrecy operating points.
pub fn time_sharing_region(ch: &ChannelPair) -> Result<RegionBoundary> {
    let caps = max_rates(ch)?;
    Ok(time_sharing_from(caps))
}

pub fn time_sharing_from(caps: RatePair) -> RegionBoundary {
    let points = vec![
        RateRectangle { corner: RatePair::new(0.0, caps.r2), param: 0.0, param_kind: ParamKind::TimeSharing },
        RateRectangle { corner: RatePair::new(caps.r1, 0.0), param: 1.0, param_kind: ParamKind::TimeSharing },
    ];
    RegionBoundary::build(ParamKind::TimeSharing, points, &[])
}

/// How far the capacity frontier sits above the time-sharing line along the
/// diagonal `r1 = r2`.
pub fn equal_rate_gap(capacity: &RegionBoundary, time_sharing: &RegionBoundary) -> f64 {
    geometry::equal_rate_point(&capacity.hull) - geometry::equal_rate_point(&time_sharing.hull)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ExampleVariant;

    fn ch(h: &[f64], g: &[f64], p: f64) -> ChannelPair {
        ChannelPair::complex_from_real(h, g, p).unwrap()
    }

    #[test]
    fn gamma_endpoint_identities() {
        let c = ChannelPair::example(ExampleVariant::TextG);
        let s = spectrum(&c).unwrap();
        assert_eq!(gamma1(&c, &s, 0.0).unwrap(), 1.0);
        assert_eq!(gamma2(&c, &s, 1.0).unwrap().0, 1.0);
        assert!((gamma1(&c, &s, 1.0).unwrap() - s.lambda1).abs() <= 1e-9 * s.lambda1);
        assert!((gamma2(&c, &s, 0.0).unwrap().0 - s.lambda2).abs() <= 1e-9 * s.lambda2);
        assert!(matches!(gamma1(&c, &s, 1.5), Err(Error::ParamOutOfRange { .. })));
        assert!(matches!(gamma2(&c, &s, -0.1), Err(Error::ParamOutOfRange { .. })));
    }

    #[test]
    fn identical_channels_collapse_to_origin() {
        let c = ch(&[1.0, 0.0], &[1.0, 0.0], 10.0);
        let r = capacity_region(&c, &SweepConfig::uniform(16)).unwrap();
        assert_eq!(r.hull.len(), 1);
        assert!(r.hull[0].r1 < 1e-9 && r.hull[0].r2 < 1e-9);
    }

    #[test]
    fn no_eavesdropper_gives_single_axis_region() {
        let c = ch(&[1.0, 0.0], &[0.0, 0.0], 3.0);
        let r = capacity_region(&c, &SweepConfig::default()).unwrap();
        assert_eq!(r.hull.len(), 1);
        assert!((r.hull[0].r1 - 2.0).abs() < 1e-12);
        assert_eq!(r.hull[0].r2, 0.0);
        assert!((miso_wiretap_capacity(&c).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_users_time_share_exactly_on_log_curve() {
        let c = ch(&[1.0, 0.0], &[0.0, 1.0], 3.0);
        let m = max_rates(&c).unwrap();
        assert!((m.r1 - 2.0).abs() < 1e-12 && (m.r2 - 2.0).abs() < 1e-12);
        let ts = time_sharing_region(&c).unwrap();
        assert_eq!(ts.hull, vec![RatePair::new(0.0, m.r2), RatePair::new(m.r1, 0.0)]);
        // The orthogonal channel reaches (log(1+αP), log(1+(1−α)P)), strictly above time sharing.
        let r = capacity_region(&c, &SweepConfig::uniform(11)).unwrap();
        assert!(equal_rate_gap(&r, &ts) > 0.0);
        let mid = r.points.iter().find(|p| p.param == 0.5).unwrap();
        assert!((mid.corner.r1 - 2.5f64.log2()).abs() < 1e-12);
        assert!((mid.corner.r2 - 2.5f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn minimal_grid_is_valid() {
        let c = ChannelPair::example(ExampleVariant::TextG);
        let r = capacity_region(&c, &SweepConfig::uniform(2)).unwrap();
        assert_eq!(r.points.len(), 2);
        let m = max_rates(&c).unwrap();
        assert_eq!(r.r1_intercept(), m.r1);
        assert_eq!(r.r2_intercept(), m.r2);
        assert!(SweepConfig::uniform(1).validate().is_err());
    }

    #[test]
    fn beta_endpoints_mirror_alpha_endpoints() {
        let c = ChannelPair::example(ExampleVariant::TextG);
        let s = spectrum(&c).unwrap();
        assert!((xi1(&c, &s, 0.0).unwrap() - s.lambda1).abs() <= 1e-9 * s.lambda1);
        assert_eq!(xi1(&c, &s, 1.0).unwrap(), 1.0);
        assert!((xi2(&c, &s, 1.0).unwrap() - s.lambda2).abs() <= 1e-9 * s.lambda2);
        assert_eq!(xi2(&c, &s, 0.0).unwrap(), 1.0);
    }
}
