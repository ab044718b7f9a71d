//! M1 distance as a monotone matching problem between completed graphs.
//!
//! The distance between two paths' completed graphs under the sup norm on
//! time-value space equals the infimum over order-preserving traversals of
//! the largest pointwise distance. That infimum is computed exactly by a
//! free-space feasibility decision ("can the graphs be traversed jointly
//! staying within eps?") combined with a search over the critical values
//! where feasibility can flip.

use super::graph::CompletedGraph;
use super::nudge_t;
use crate::path::{sup_dist, CadlagPath};
use crate::{Error, Result};

/// Relative tolerance at which a bisection bracket is identified with a
/// critical candidate value and reported as exact.
const SNAP_REL: f64 = 1e-9;

/// Parameter interval of segment `[a, b]` whose points lie within `eps` of
/// `p` in sup norm, clipped to `[0, 1]`. Each coordinate contributes a slab.
fn free_interval(p: &[f64], a: &[f64], b: &[f64], eps: f64) -> Option<(f64, f64)> {
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for k in 0..p.len() {
        let c = p[k] - a[k];
        let d = b[k] - a[k];
        if d == 0.0 {
            if c.abs() > eps {
                return None;
            }
        } else {
            let (e0, e1) = ((c - eps) / d, (c + eps) / d);
            lo = lo.max(e0.min(e1));
            hi = hi.min(e0.max(e1));
        }
        if lo > hi {
            return None;
        }
    }
    Some((lo, hi))
}

/// Earliest minimizer of `max_k |c_k - s d_k|` over `s` in `[s_min, 1]`
/// where `c = p - a`, `d = b - a`: the sup distance from `p` to the tail of
/// segment `[a, b]`. Returns `(s, distance)`.
///
/// The objective is piecewise linear and convex in `s`; its minimum sits at
/// an interval end, a coordinate zero, or a crossing of two coordinate
/// envelopes, so evaluating those finitely many candidates is exact.
pub(crate) fn min_dist_on_segment(p: &[f64], a: &[f64], b: &[f64], s_min: f64) -> (f64, f64) {
    let n = p.len();
    let c: Vec<f64> = (0..n).map(|k| p[k] - a[k]).collect();
    let d: Vec<f64> = (0..n).map(|k| b[k] - a[k]).collect();
    let eval = |s: f64| -> f64 {
        (0..n)
            .map(|k| (c[k] - s * d[k]).abs())
            .fold(0.0f64, f64::max)
    };
    let mut best_s = s_min;
    let mut best = eval(s_min);
    let mut try_s = |s: f64| {
        if s.is_finite() {
            let s = s.clamp(s_min, 1.0);
            let v = eval(s);
            // Strict improvement keeps the earliest minimizer on ties.
            if v < best || (v == best && s < best_s) {
                best = v;
                best_s = s;
            }
        }
    };
    try_s(1.0);
    for k in 0..n {
        if d[k] != 0.0 {
            try_s(c[k] / d[k]);
        }
        for l in k + 1..n {
            if d[k] - d[l] != 0.0 {
                try_s((c[k] - c[l]) / (d[k] - d[l]));
            }
            if d[k] + d[l] != 0.0 {
                try_s((c[k] + c[l]) / (d[k] + d[l]));
            }
        }
    }
    (best_s, best)
}

fn dist_point_to_segment(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    min_dist_on_segment(p, a, b, 0.0).1
}

/// Free-space feasibility: is there a monotone joint traversal of polylines
/// `p` and `q` keeping sup distance at most `eps`?
///
/// Within one cell the free region is an intersection of slabs, hence
/// convex, so reachability propagates through cell edges exactly.
fn feasible(p: &[Vec<f64>], q: &[Vec<f64>], eps: f64) -> bool {
    let n = p.len();
    let m = q.len();
    if sup_dist(&p[0], &q[0]) > eps || sup_dist(&p[n - 1], &q[m - 1]) > eps {
        return false;
    }
    if n == 1 {
        return q.iter().all(|v| sup_dist(&p[0], v) <= eps);
    }
    if m == 1 {
        return p.iter().all(|v| sup_dist(v, &q[0]) <= eps);
    }

    // bot[i]: reachable part of the bottom edge of cell (i, j) while row j
    // is being processed. Row 0 bottoms come from sliding along q[0].
    let mut bot: Vec<Option<(f64, f64)>> = vec![None; n - 1];
    let mut open = true;
    for (i, slot) in bot.iter_mut().enumerate() {
        if !open {
            break;
        }
        match free_interval(&q[0], &p[i], &p[i + 1], eps) {
            Some((lo, hi)) if lo == 0.0 => {
                *slot = Some((lo, hi));
                open = hi == 1.0;
            }
            _ => open = false,
        }
    }

    let mut corner_left: Option<(f64, f64)> = None;
    let mut corner_bot: Option<(f64, f64)> = None;
    let mut col_open = true;
    for j in 0..m - 1 {
        // Left edge of cell (0, j): sliding up along p[0].
        let mut left: Option<(f64, f64)> = if col_open {
            match free_interval(&p[0], &q[j], &q[j + 1], eps) {
                Some((lo, hi)) if lo == 0.0 => {
                    col_open = hi == 1.0;
                    Some((lo, hi))
                }
                _ => {
                    col_open = false;
                    None
                }
            }
        } else {
            None
        };
        for i in 0..n - 1 {
            let bottom = bot[i];
            let free_right = free_interval(&p[i + 1], &q[j], &q[j + 1], eps);
            let right = match (bottom, left, free_right) {
                (Some(_), _, f) => f,
                (None, Some((llo, _)), Some((flo, fhi))) => {
                    let lo = flo.max(llo);
                    (lo <= fhi).then_some((lo, fhi))
                }
                _ => None,
            };
            let free_top = free_interval(&q[j + 1], &p[i], &p[i + 1], eps);
            let top = match (left, bottom, free_top) {
                (Some(_), _, f) => f,
                (None, Some((blo, _)), Some((flo, fhi))) => {
                    let lo = flo.max(blo);
                    (lo <= fhi).then_some((lo, fhi))
                }
                _ => None,
            };
            bot[i] = top;
            left = right;
            if i == n - 2 && j == m - 2 {
                corner_left = right;
                corner_bot = top;
            }
        }
    }
    matches!(corner_left, Some((_, hi)) if hi >= 1.0)
        || matches!(corner_bot, Some((_, hi)) if hi >= 1.0)
}

/// Critical values where feasibility can flip: endpoint distances,
/// vertex-vertex distances, and vertex-to-segment minima in both directions.
fn critical_values(p: &[Vec<f64>], q: &[Vec<f64>]) -> Vec<f64> {
    let mut cs = vec![0.0f64];
    for u in p {
        for v in q {
            cs.push(sup_dist(u, v));
        }
    }
    for u in p {
        for w in q.windows(2) {
            cs.push(dist_point_to_segment(u, &w[0], &w[1]));
        }
    }
    for v in q {
        for w in p.windows(2) {
            cs.push(dist_point_to_segment(v, &w[0], &w[1]));
        }
    }
    cs.retain(|c| c.is_finite());
    cs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cs.dedup();
    cs
}

/// Exact-where-possible bracket on the monotone matching distance between
/// two polylines. Returns `(lower, upper)` with `lower <= d <= upper`; the
/// bracket collapses to a point when the search resolves at a critical
/// value (relative tolerance 1e-9).
pub(crate) fn frechet_bracket(p: &[Vec<f64>], q: &[Vec<f64>]) -> (f64, f64) {
    let cs = critical_values(p, q);
    // The largest vertex-vertex distance always admits a traversal, so the
    // top candidate is feasible and binary search is well posed.
    let mut hi_idx = cs.len() - 1;
    debug_assert!(feasible(p, q, cs[hi_idx]));
    if feasible(p, q, cs[0]) {
        return (cs[0], cs[0]);
    }
    let mut lo_idx = 0usize;
    while hi_idx - lo_idx > 1 {
        let mid = (lo_idx + hi_idx) / 2;
        if feasible(p, q, cs[mid]) {
            hi_idx = mid;
        } else {
            lo_idx = mid;
        }
    }

    let c_lo = cs[lo_idx];
    let c_hi = cs[hi_idx];
    let scale = c_hi.abs().max(1.0);
    let mut a = c_lo;
    let mut b = c_hi;
    for _ in 0..80 {
        if b - a <= SNAP_REL * scale * 0.01 {
            break;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if feasible(p, q, mid) {
            b = mid;
        } else {
            a = mid;
        }
    }
    if c_hi - a <= SNAP_REL * scale {
        (c_hi, c_hi)
    } else {
        (a, b)
    }
}

/// M1 distance bracket between two paths on `[0, t_max]`.
///
/// `mesh` sets the step for moving `t_max` off a jump time (cutting exactly
/// at a jump is ambiguous); the matching search itself is exact, not
/// mesh-discretized. Returns `(lower, upper)`.
pub fn m1_distance(
    x1: &CadlagPath,
    x2: &CadlagPath,
    t_max: f64,
    mesh: f64,
) -> Result<(f64, f64)> {
    if x1.dim() != x2.dim() {
        return Err(Error::Domain(format!(
            "dimension mismatch: {} vs {}",
            x1.dim(),
            x2.dim()
        )));
    }
    let t = nudge_t(&[x1, x2], t_max, mesh)?;
    let g1 = CompletedGraph::new(x1, t)?;
    let g2 = CompletedGraph::new(x2, t)?;
    Ok(frechet_bracket(g1.points(), g2.points()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(h: f64, knots: &[(f64, f64)]) -> CadlagPath {
        CadlagPath::scalar_step(h, knots).unwrap()
    }

    #[test]
    fn identical_paths_have_zero_distance() {
        let x = step(4.0, &[(0.0, 0.0), (1.0, 5.0), (3.0, 2.0)]);
        assert_eq!(m1_distance(&x, &x, 4.0, 0.01).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn shifted_indicator_distance_is_the_shift() {
        let x = step(3.0, &[(0.0, 0.0), (1.0, 1.0)]);
        let y = step(3.0, &[(0.0, 0.0), (1.25, 1.0)]);
        let (lo, hi) = m1_distance(&x, &y, 3.0, 0.01).unwrap();
        assert_eq!((lo, hi), (0.25, 0.25));
    }

    #[test]
    fn indicator_vs_ramp_is_within_ramp_width() {
        // A jump at 1 against a linear rise over [1, 1 + w]: matching the
        // vertical to the ramp costs at most w in the time coordinate.
        let w = 0.125;
        let x = step(3.0, &[(0.0, 0.0), (1.0, 1.0)]);
        let y =
            CadlagPath::scalar_linear(3.0, &[(0.0, 0.0), (1.0, 0.0), (1.0 + w, 1.0), (3.0, 1.0)])
                .unwrap();
        let (lo, hi) = m1_distance(&x, &y, 3.0, 0.01).unwrap();
        assert!(hi <= w + 1e-12, "upper {hi} > {w}");
        assert!(lo >= 0.0 && lo <= hi);
    }

    #[test]
    fn step_levels_differ_by_level_gap() {
        let x = step(2.0, &[(0.0, 0.0), (1.0, 1.0)]);
        let y = step(2.0, &[(0.0, 0.0), (1.0, 1.5)]);
        let (lo, hi) = m1_distance(&x, &y, 2.0, 0.01).unwrap();
        assert_eq!((lo, hi), (0.5, 0.5));
    }

    #[test]
    fn cut_at_jump_time_is_nudged() {
        let x = step(4.0, &[(0.0, 0.0), (2.0, 1.0)]);
        let y = step(4.0, &[(0.0, 0.0), (2.0, 1.0)]);
        // t_max = 2 hits the shared jump; the nudge moves the cut to 2.5
        // and the paths still agree there.
        assert_eq!(m1_distance(&x, &y, 2.0, 0.5).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn point_to_segment_minimum_is_exact_on_dyadics() {
        // Corner (1.75, 1.25) against the segment (0,0)-(3,3): the envelope
        // crossing sits at s = 0.5 with value 0.25 exactly.
        let d = dist_point_to_segment(&[1.75, 1.25], &[0.0, 0.0], &[3.0, 3.0]);
        assert_eq!(d, 0.25);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let x = step(2.0, &[(0.0, 0.0)]);
        let y = CadlagPath::constant(2.0, vec![0.0, 0.0]).unwrap();
        assert!(m1_distance(&x, &y, 2.0, 0.01).is_err());
    }

    #[test]
    fn free_interval_matches_slab_geometry() {
        // Point (1, 0) against segment (0,0)-(2,0) at eps 0.5: time slab
        // [0.25, 0.75], value unconstrained.
        assert_eq!(
            free_interval(&[1.0, 0.0], &[0.0, 0.0], &[2.0, 0.0], 0.5),
            Some((0.25, 0.75))
        );
        assert_eq!(
            free_interval(&[1.0, 2.0], &[0.0, 0.0], &[2.0, 0.0], 0.5),
            None
        );
    }
}
