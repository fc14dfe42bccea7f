//! Rate-space geometry: Pareto frontiers of convex hulls, containment,
//! boundary distances.
//!
//! Every region handled here is downward closed in the non-negative
//! quadrant, so it is fully described by its upper-right frontier.

use serde::{Deserialize, Serialize};

/// Points closer than this are merged when extracting a frontier.
pub const DEDUP_TOL: f64 = 1e-12;

/// Number of arc-length samples per polyline in [`hausdorff_distance`].
pub const HAUSDORFF_SAMPLES: usize = 2048;

/// A rate pair in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub const ZERO: Self = Self { r1: 0.0, r2: 0.0 };

    pub fn new(r1: f64, r2: f64) -> Self {
        Self { r1, r2 }
    }

    pub fn scaled(self, s: f64) -> Self {
        Self { r1: self.r1 * s, r2: self.r2 * s }
    }

    fn dist(self, other: Self) -> f64 {
        (self.r1 - other.r1).hypot(self.r2 - other.r2)
    }
}

/// `(b - a) × (c - a)`; positive when `c` lies to the left of `a → b`.
fn cross(a: RatePair, b: RatePair, c: RatePair) -> f64 {
    (b.r1 - a.r1) * (c.r2 - a.r2) - (b.r2 - a.r2) * (c.r1 - a.r1)
}

/// Upper-right Pareto chain of the convex hull of `points ∪ {(0,0)}`,
/// ordered by increasing `r1` (and strictly decreasing `r2`).
///
/// Uses Andrew's monotone chain for the upper hull, then keeps the part
/// between the highest point and the right-most point.
pub fn pareto_hull(points: &[RatePair]) -> Vec<RatePair> {
    let mut pts: Vec<RatePair> = points
        .iter()
        .copied()
        .filter(|p| p.r1.is_finite() && p.r2.is_finite())
        .map(|p| RatePair::new(p.r1.max(0.0), p.r2.max(0.0)))
        .collect();
    pts.push(RatePair::ZERO);
    pts.sort_by(|a, b| a.r1.total_cmp(&b.r1).then(a.r2.total_cmp(&b.r2)));
    // Near-duplicates merge into their componentwise maximum.
    pts.dedup_by(|a, b| {
        let close = a.dist(*b) <= DEDUP_TOL;
        if close {
            b.r1 = b.r1.max(a.r1);
            b.r2 = b.r2.max(a.r2);
        }
        close
    });

    let mut upper: Vec<RatePair> = Vec::with_capacity(pts.len());
    for p in pts {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) >= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }

    let top = upper.iter().map(|p| p.r2).fold(f64::NEG_INFINITY, f64::max);
    let start = upper.iter().rposition(|p| p.r2 >= top - DEDUP_TOL).unwrap_or(0);
    let mut frontier: Vec<RatePair> = Vec::with_capacity(upper.len() - start);
    for p in &upper[start..] {
        match frontier.last() {
            Some(last) if p.r1 <= last.r1 + DEDUP_TOL || p.r2 >= last.r2 - DEDUP_TOL => {
                // Collapses round-off duplicates and flat/vertical tails.
                if p.r1 > last.r1 + DEDUP_TOL && p.r2 >= last.r2 - DEDUP_TOL {
                    let n = frontier.len();
                    frontier[n - 1] = *p;
                }
            }
            _ => frontier.push(*p),
        }
    }
    frontier
}

/// Closed boundary of the region as a polyline from the `r2` axis to the
/// `r1` axis: `(0, r2₀) → frontier → (r1ₙ, 0)`.
pub fn boundary_polyline(frontier: &[RatePair]) -> Vec<RatePair> {
    let (Some(first), Some(last)) = (frontier.first(), frontier.last()) else {
        return vec![RatePair::ZERO];
    };
    let mut line = Vec::with_capacity(frontier.len() + 2);
    line.push(RatePair::new(0.0, first.r2));
    line.extend_from_slice(frontier);
    line.push(RatePair::new(last.r1, 0.0));
    line.dedup_by(|a, b| a.dist(*b) <= DEDUP_TOL);
    line
}

/// How far `p` sticks out of the convex region under `frontier`: the
/// largest violation over the axis bounds and every edge's supporting line
/// (Euclidean distance), or 0 when `p` is inside.
pub fn frontier_excess(frontier: &[RatePair], p: RatePair) -> f64 {
    let line = boundary_polyline(frontier);
    let max_r1 = line.iter().map(|q| q.r1).fold(0.0, f64::max);
    let max_r2 = line.iter().map(|q| q.r2).fold(0.0, f64::max);
    let mut excess = (p.r1 - max_r1).max(p.r2 - max_r2).max(0.0);
    for w in line.windows(2) {
        let len = w[0].dist(w[1]);
        if len > 0.0 {
            excess = excess.max(cross(w[0], w[1], p) / len);
        }
    }
    excess
}

/// Height of the boundary polyline above `x`, with `line` ascending in
/// `x` (taken as the first coordinate of `key`). `None` past the end.
fn polyline_height(line: &[(f64, f64)], x: f64) -> Option<f64> {
    let i = line.partition_point(|q| q.0 < x);
    let q = line.get(i)?;
    if q.0 == x || i == 0 {
        return Some(q.1);
    }
    let p = line[i - 1];
    Some(p.1 + (x - p.0) / (q.0 - p.0) * (q.1 - p.1))
}

/// Upper bound on [`frontier_excess`] in `O(log n)`: the smaller of the
/// vertical and horizontal overshoot of `p` past the boundary. Zero exactly
/// when `p` is inside.
pub fn axis_excess(frontier: &[RatePair], p: RatePair) -> f64 {
    let (by_r1, by_r2) = axis_tables(frontier);
    axis_excess_prepared(&by_r1, &by_r2, p)
}

/// Boundary in both axis orders, for repeated [`axis_excess`] queries.
pub fn axis_tables(frontier: &[RatePair]) -> (Vec<(f64, f64)>, Vec<(f64, f64)>) {
    let line = boundary_polyline(frontier);
    (line.iter().map(|q| (q.r1, q.r2)).collect(), line.iter().rev().map(|q| (q.r2, q.r1)).collect())
}

pub fn axis_excess_prepared(by_r1: &[(f64, f64)], by_r2: &[(f64, f64)], p: RatePair) -> f64 {
    let v = polyline_height(by_r1, p.r1).map(|y| p.r2 - y);
    let h = polyline_height(by_r2, p.r2).map(|x| p.r1 - x);
    match (v, h) {
        (Some(v), Some(h)) => v.min(h).max(0.0),
        (Some(d), None) | (None, Some(d)) => d.max(0.0),
        (None, None) => {
            let (x, y) = (by_r1.last().map_or(0.0, |q| q.0), by_r2.last().map_or(0.0, |q| q.0));
            (p.r1 - x).hypot(p.r2 - y)
        }
    }
}

/// True iff `p` is dominated by the convex region under `frontier`, allowing
/// a violation of up to `tol`.
pub fn frontier_contains(frontier: &[RatePair], p: RatePair, tol: f64) -> bool {
    frontier_excess(frontier, p) <= tol
}

pub(crate) fn point_segment_distance(p: RatePair, a: RatePair, b: RatePair) -> f64 {
    let (dx, dy) = (b.r1 - a.r1, b.r2 - a.r2);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = (((p.r1 - a.r1) * dx + (p.r2 - a.r2) * dy) / len2).clamp(0.0, 1.0);
    p.dist(RatePair::new(a.r1 + t * dx, a.r2 + t * dy))
}

fn point_polyline_distance(p: RatePair, line: &[RatePair]) -> f64 {
    match line {
        [] => f64::INFINITY,
        [only] => p.dist(*only),
        _ => line.windows(2).map(|w| point_segment_distance(p, w[0], w[1])).fold(f64::INFINITY, f64::min),
    }
}

/// `n` points spaced uniformly by arc length along `line`, endpoints included.
pub fn sample_polyline(line: &[RatePair], n: usize) -> Vec<RatePair> {
    let lengths: Vec<f64> = line.windows(2).map(|w| w[0].dist(w[1])).collect();
    let total: f64 = lengths.iter().sum();
    if line.len() < 2 || total == 0.0 || n < 2 {
        return vec![line.first().copied().unwrap_or_default(); n.max(1)];
    }
    let mut out = Vec::with_capacity(n);
    let mut seg = 0;
    let mut walked = 0.0;
    for k in 0..n {
        let s = total * k as f64 / (n - 1) as f64;
        while seg + 1 < lengths.len() && walked + lengths[seg] < s {
            walked += lengths[seg];
            seg += 1;
        }
        let t = if lengths[seg] > 0.0 { ((s - walked) / lengths[seg]).clamp(0.0, 1.0) } else { 0.0 };
        let (a, b) = (line[seg], line[seg + 1]);
        out.push(RatePair::new(a.r1 + t * (b.r1 - a.r1), a.r2 + t * (b.r2 - a.r2)));
    }
    out
}

/// Symmetric Hausdorff distance between two region boundaries, each
/// sampled at [`HAUSDORFF_SAMPLES`] points and measured against the other
/// polyline exactly.
pub fn hausdorff_distance(a: &[RatePair], b: &[RatePair]) -> f64 {
    let la = boundary_polyline(a);
    let lb = boundary_polyline(b);
    let one_way = |from: &[RatePair], to: &[RatePair]| {
        sample_polyline(from, HAUSDORFF_SAMPLES)
            .into_iter()
            .map(|p| point_polyline_distance(p, to))
            .fold(0.0, f64::max)
    };
    one_way(&la, &lb).max(one_way(&lb, &la))
}

/// Largest distance from the hull boundary to the union of the rectangles
/// `[0, c.r1] × [0, c.r2]`; zero when the union is already convex (up to
/// sampling).
pub fn hull_union_gap(frontier: &[RatePair], corners: &[RatePair]) -> f64 {
    let line = boundary_polyline(frontier);
    sample_polyline(&line, HAUSDORFF_SAMPLES)
        .into_iter()
        .map(|q| {
            corners
                .iter()
                .map(|c| (q.r1 - c.r1).max(0.0).hypot((q.r2 - c.r2).max(0.0)))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Common coordinate where the boundary crosses the line `r1 = r2`.
pub fn equal_rate_point(frontier: &[RatePair]) -> f64 {
    let line = boundary_polyline(frontier);
    for w in line.windows(2) {
        let (da, db) = (w[0].r1 - w[0].r2, w[1].r1 - w[1].r2);
        if da <= 0.0 && db >= 0.0 {
            if db == da {
                return w[0].r1.max(w[0].r2);
            }
            let t = -da / (db - da);
            return w[0].r1 + t * (w[1].r1 - w[0].r1);
        }
    }
    0.0
}

/// Maximum over consecutive frontier edges of the slope increase; a convex
/// frontier has every value `≤ 0` (up to round-off).
pub fn max_slope_increase(frontier: &[RatePair]) -> f64 {
    let slopes: Vec<f64> = frontier.windows(2).map(|w| (w[1].r2 - w[0].r2) / (w[1].r1 - w[0].r1)).collect();
    slopes.windows(2).map(|s| s[1] - s[0]).fold(f64::NEG_INFINITY, f64::max)
}
