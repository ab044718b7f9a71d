//! J1 distance brackets and the exact uniform distance.
//!
//! For step paths the J1 optimization reduces to interleaving the two jump
//! sequences, which a bottleneck dynamic program solves exactly. For paths
//! with linear pieces the upper bound pins the time change to a grid and
//! the lower bound falls back on M1, which J1 dominates.

use super::frechet;
use super::graph::CompletedGraph;
use super::nudge_t;
use crate::path::{sup_dist, CadlagPath};
use crate::{Error, Result};

/// Largest grid size the pinned-time-change dynamic program accepts.
const MAX_GRID: usize = 4096;

/// Exact sup distance between two paths on `[0, t_max]`.
///
/// Between consecutive knot events both paths are affine, so the difference
/// attains its sup at an event, approached from either side.
pub fn uniform_distance(x1: &CadlagPath, x2: &CadlagPath, t_max: f64) -> Result<f64> {
    if x1.dim() != x2.dim() {
        return Err(Error::Domain(format!(
            "dimension mismatch: {} vs {}",
            x1.dim(),
            x2.dim()
        )));
    }
    let mut events: Vec<f64> = vec![0.0, t_max];
    for p in [x1, x2] {
        events.extend(p.knot_times().iter().copied().filter(|&t| t <= t_max));
    }
    events.sort_by(|a, b| a.partial_cmp(b).unwrap());
    events.dedup();
    let mut worst = 0.0f64;
    for &t in &events {
        worst = worst.max(sup_dist(&x1.eval(t)?, &x2.eval(t)?));
        if t > 0.0 {
            worst = worst.max(sup_dist(&x1.left_limit(t)?, &x2.left_limit(t)?));
        }
    }
    Ok(worst)
}

fn is_step_path(x: &CadlagPath) -> bool {
    (0..x.knot_count().saturating_sub(1)).all(|i| x.segment_is_const(i))
}

/// Jump times in `(0, horizon]` and the constant levels between them
/// (`levels.len() == times.len() + 1`).
fn step_profile(x: &CadlagPath) -> (Vec<f64>, Vec<Vec<f64>>) {
    let jumps = x.discontinuities();
    let mut levels = Vec::with_capacity(jumps.len() + 1);
    levels.push(x.knot_value(0).to_vec());
    let times = jumps
        .iter()
        .map(|j| {
            levels.push(j.right.clone());
            j.time
        })
        .collect();
    (times, levels)
}

fn dist_to_interval(x: f64, lo: f64, hi: f64) -> f64 {
    (lo - x).max(x - hi).max(0.0)
}

/// Exact J1 distance between two step paths on `[0, t_end]`.
///
/// A time change is determined, up to irrelevant wiggle, by how the two
/// jump sequences interleave and where unmatched jumps of the first path
/// land inside the second path's plateaus. The bottleneck DP minimizes the
/// max of time pin costs and per-interleaving-piece value distances over
/// all interleavings.
fn j1_step_exact(a: &CadlagPath, b: &CadlagPath, t_end: f64) -> f64 {
    let (s, v) = step_profile(a);
    let (t, w) = step_profile(b);
    let p = s.len();
    let q = t.len();
    let inf = f64::INFINITY;
    let mut dp = vec![inf; (p + 1) * (q + 1)];
    let idx = |i: usize, j: usize| i * (q + 1) + j;
    dp[idx(0, 0)] = sup_dist(&v[0], &w[0]);
    for i in 0..=p {
        for j in 0..=q {
            if i == 0 && j == 0 {
                continue;
            }
            let val = sup_dist(&v[i], &w[j]);
            let mut best = inf;
            if i > 0 && j > 0 {
                let c = dp[idx(i - 1, j - 1)]
                    .max(val)
                    .max((s[i - 1] - t[j - 1]).abs());
                best = best.min(c);
            }
            if i > 0 {
                // a's jump lands inside b's current plateau.
                let lo = if j == 0 { 0.0 } else { t[j - 1] };
                let hi = if j < q { t[j] } else { t_end };
                let c = dp[idx(i - 1, j)]
                    .max(val)
                    .max(dist_to_interval(s[i - 1], lo, hi));
                best = best.min(c);
            }
            if j > 0 {
                // b jumps while a's image stays on its current level; the
                // time change pins nothing new.
                best = best.min(dp[idx(i, j - 1)].max(val));
            }
            dp[idx(i, j)] = best;
        }
    }
    dp[idx(p, q)]
}

/// Knot times of `x` strictly inside `(t0, t1)`.
fn interior_knots(x: &CadlagPath, t0: f64, t1: f64) -> Vec<f64> {
    let times = x.knot_times();
    let a = times.partition_point(|&u| u <= t0);
    let b = times.partition_point(|&u| u < t1);
    times[a..b].to_vec()
}

/// Exact `sup_{t in [t0, t1]} |w - x(t)|`, including left limits at
/// interior events and at `t1`.
fn sup_fixed_vs_path(w: &[f64], x: &CadlagPath, t0: f64, t1: f64) -> Result<f64> {
    let mut worst = sup_dist(w, &x.eval(t0)?);
    for u in interior_knots(x, t0, t1) {
        worst = worst.max(sup_dist(w, &x.eval(u)?));
        worst = worst.max(sup_dist(w, &x.left_limit(u)?));
    }
    worst = worst.max(sup_dist(w, &x.eval(t1)?));
    if t1 > t0 && t1 > 0.0 {
        worst = worst.max(sup_dist(w, &x.left_limit(t1)?));
    }
    Ok(worst)
}

/// Exact `sup_{t in [t0, t1]} |a(lam(t)) - b(t)|` for the affine increasing
/// `lam` with `lam(t0) = u0`, `lam(t1) = u1`.
fn sup_affine_pair(
    a: &CadlagPath,
    u0: f64,
    u1: f64,
    b: &CadlagPath,
    t0: f64,
    t1: f64,
) -> Result<f64> {
    let identity = u0 == t0 && u1 == t1;
    let lam = |t: f64| u0 + (t - t0) / (t1 - t0) * (u1 - u0);
    let inv = |u: f64| t0 + (u - u0) / (u1 - u0) * (t1 - t0);
    // Pulled-back knot times round-trip through the affine map; snapping
    // the image back onto a nearby knot keeps jump evaluations two-sided
    // instead of landing an ulp before the jump.
    let snap_tol = (u1 - u0).abs() * 1e-9;
    let snap = |u: f64| -> f64 {
        let times = a.knot_times();
        let k = times.partition_point(|&v| v < u);
        let mut best = u;
        let mut gap = snap_tol;
        for idx in [k.wrapping_sub(1), k] {
            if idx < times.len() {
                let d = (times[idx] - u).abs();
                if d <= gap {
                    gap = d;
                    best = times[idx];
                }
            }
        }
        best
    };
    let mut events = vec![t0, t1];
    events.extend(interior_knots(b, t0, t1));
    events.extend(interior_knots(a, u0, u1).into_iter().map(inv));
    events.retain(|&t| t >= t0 && t <= t1);
    events.sort_by(|x, y| x.partial_cmp(y).unwrap());
    events.dedup();
    let mut worst = 0.0f64;
    for &t in &events {
        let u = if identity {
            t
        } else if t == t1 {
            u1
        } else if t == t0 {
            u0
        } else {
            snap(lam(t))
        };
        worst = worst.max(sup_dist(&a.eval(u)?, &b.eval(t)?));
        if t > t0 && t > 0.0 && u > 0.0 {
            worst = worst.max(sup_dist(&a.left_limit(u)?, &b.left_limit(t)?));
        }
    }
    Ok(worst)
}

/// Upper bound on the J1 distance from a dynamic program over time changes
/// pinned to a grid of pitch `mesh`. Vertical and flat grid moves realize
/// the limits of steep and flat affine pieces, so every DP route is
/// achievable in the closure and the value bounds the infimum from above.
fn j1_grid_upper(a: &CadlagPath, b: &CadlagPath, t_end: f64, mesh: f64) -> Result<f64> {
    let m = (t_end / mesh).ceil() as usize;
    if m > MAX_GRID {
        return Err(Error::Domain(format!(
            "grid of {m} cells exceeds the limit {MAX_GRID}; use a coarser mesh"
        )));
    }
    let g: Vec<f64> = (0..=m)
        .map(|k| if k == m { t_end } else { (k as f64) * mesh })
        .collect();
    let inf = f64::INFINITY;
    let n = m + 1;
    let mut dp = vec![inf; n * n];
    dp[0] = sup_dist(&a.eval(0.0)?, &b.eval(0.0)?);
    for i in 0..n {
        for j in 0..n {
            if i == 0 && j == 0 {
                continue;
            }
            let pin = (g[i] - g[j]).abs();
            let mut best = inf;
            if i > 0 && j > 0 {
                let piece = sup_affine_pair(a, g[i - 1], g[i], b, g[j - 1], g[j])?;
                best = best.min(dp[(i - 1) * n + j - 1].max(piece));
            }
            if i > 0 {
                // Steep limit: a sweeps [g[i-1], g[i]] while b sits at g[j].
                let mut piece = sup_fixed_vs_path(&b.eval(g[j])?, a, g[i - 1], g[i])?;
                if g[j] > 0.0 {
                    piece = piece.max(sup_fixed_vs_path(
                        &b.left_limit(g[j])?,
                        a,
                        g[i - 1],
                        g[i],
                    )?);
                }
                best = best.min(dp[(i - 1) * n + j].max(piece));
            }
            if j > 0 {
                // Flat limit: the time change rests at g[i] while b runs.
                let piece = sup_fixed_vs_path(&a.eval(g[i])?, b, g[j - 1], g[j])?;
                best = best.min(dp[i * n + j - 1].max(piece));
            }
            dp[i * n + j] = best.max(pin);
        }
    }
    Ok(dp[n * n - 1])
}

/// J1 distance bracket between two paths on `[0, t_max]`.
///
/// `mesh` sets both the jump-avoiding nudge of `t_max` and the grid pitch
/// of the upper-bound search for paths with linear pieces. Step paths are
/// solved exactly and return a collapsed bracket.
pub fn j1_distance(
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
    let a = x1.restrict(t)?;
    let b = x2.restrict(t)?;
    if is_step_path(&a) && is_step_path(&b) {
        let d = j1_step_exact(&a, &b, t);
        return Ok((d, d));
    }
    let g1 = CompletedGraph::new(&a, t)?;
    let g2 = CompletedGraph::new(&b, t)?;
    let (m1_lower, _) = frechet::frechet_bracket(g1.points(), g2.points());
    let upper = j1_grid_upper(&a, &b, t, mesh)?;
    Ok((m1_lower, upper.max(m1_lower)))
}
