//! Completed graphs and ordered subsets.
//!
//! The completed graph of a path on `[0, t_max]` is a polyline in
//! time-value space: points are stored as `[t, v_1, .., v_d]` and every jump
//! contributes its vertical connecting segment. All geometry below uses the
//! sup norm on these `d + 1` coordinates.

use crate::path::{sup_dist, CadlagPath, SegmentMode};
use crate::{Error, Result};

/// Polyline of a path's graph with jump verticals filled in.
///
/// Invariants: at least one point, consecutive points distinct, times
/// nondecreasing along the point list.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletedGraph {
    dim: usize,
    points: Vec<Vec<f64>>,
}

fn push_point(points: &mut Vec<Vec<f64>>, p: Vec<f64>) {
    if points.last().map(|q| q.as_slice()) != Some(p.as_slice()) {
        points.push(p);
    }
}

fn graph_point(t: f64, v: &[f64]) -> Vec<f64> {
    let mut p = Vec::with_capacity(v.len() + 1);
    p.push(t);
    p.extend_from_slice(v);
    p
}

impl CompletedGraph {
    /// Builds the completed graph of `path` restricted to `[0, t_max]`.
    pub fn new(path: &CadlagPath, t_max: f64) -> Result<Self> {
        let x = path.restrict(t_max)?;
        let n = x.knot_count();
        let times = x.knot_times().to_vec();
        let mut points = Vec::with_capacity(n + 2);
        push_point(&mut points, graph_point(times[0], x.knot_value(0)));
        for e in 1..n {
            let t = times[e];
            match x.segment_mode(e - 1) {
                SegmentMode::Hold => {
                    // Plateau end, then the jump vertical if the value moves.
                    push_point(&mut points, graph_point(t, x.knot_value(e - 1)));
                    push_point(&mut points, graph_point(t, x.knot_value(e)));
                }
                SegmentMode::Linear => {
                    push_point(&mut points, graph_point(t, x.knot_value(e)));
                }
            }
        }
        if x.horizon() > times[n - 1] {
            push_point(
                &mut points,
                graph_point(x.horizon(), x.knot_value(n - 1)),
            );
        }
        Ok(CompletedGraph {
            dim: x.dim(),
            points,
        })
    }

    /// Spatial dimension `d` of the underlying path (points carry `d + 1`
    /// coordinates).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn start(&self) -> &[f64] {
        &self.points[0]
    }

    pub fn end(&self) -> &[f64] {
        self.points.last().unwrap()
    }

    /// Membership tolerance: absolute on unit-scale graphs, relative on
    /// large ones.
    pub(crate) fn tolerance(&self) -> f64 {
        let scale = self
            .points
            .iter()
            .flat_map(|p| p.iter())
            .fold(1.0f64, |m, &c| m.max(c.abs()));
        1e-9 * scale
    }

    /// Point of the polyline at `pos`.
    pub(crate) fn point_at(&self, pos: GraphPos) -> Vec<f64> {
        if self.points.len() == 1 {
            return self.points[0].clone();
        }
        let a = &self.points[pos.seg];
        let b = &self.points[pos.seg + 1];
        (0..a.len())
            .map(|k| a[k] + (b[k] - a[k]) * pos.s)
            .collect()
    }

    /// Earliest position at or after `from` minimizing the sup distance to
    /// `p`, with the achieved distance.
    pub(crate) fn project_from(&self, p: &[f64], from: GraphPos) -> (GraphPos, f64) {
        if self.points.len() == 1 {
            return (GraphPos { seg: 0, s: 0.0 }, sup_dist(p, &self.points[0]));
        }
        let mut best_pos = GraphPos {
            seg: self.points.len() - 2,
            s: 1.0,
        };
        let mut best = f64::INFINITY;
        for seg in from.seg..self.points.len() - 1 {
            let s_min = if seg == from.seg { from.s } else { 0.0 };
            let (s, d) = super::frechet::min_dist_on_segment(
                p,
                &self.points[seg],
                &self.points[seg + 1],
                s_min,
            );
            if d < best {
                best = d;
                best_pos = GraphPos { seg, s };
                if d == 0.0 {
                    break;
                }
            }
        }
        (best_pos, best)
    }

    /// Earliest polyline position at or after `from` whose sup distance to
    /// `p` is within `tol`.
    pub(crate) fn locate_from(&self, p: &[f64], from: GraphPos, tol: f64) -> Option<GraphPos> {
        if self.points.len() == 1 {
            return (sup_dist(p, &self.points[0]) <= tol).then_some(GraphPos { seg: 0, s: 0.0 });
        }
        for seg in from.seg..self.points.len() - 1 {
            let s_min = if seg == from.seg { from.s } else { 0.0 };
            if let Some(s) =
                first_param_within(p, &self.points[seg], &self.points[seg + 1], s_min, tol)
            {
                return Some(GraphPos { seg, s });
            }
        }
        None
    }
}

/// Position on a polyline: segment index plus parameter in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct GraphPos {
    pub seg: usize,
    pub s: f64,
}

impl GraphPos {
    pub(crate) fn at_or_after(self, other: GraphPos) -> bool {
        self.seg > other.seg || (self.seg == other.seg && self.s >= other.s)
    }
}

/// Smallest `s` in `[s_min, 1]` with `|p - (a + s (b - a))|_sup <= tol`,
/// if any. Solved coordinate-wise: each coordinate restricts `s` to a slab.
fn first_param_within(p: &[f64], a: &[f64], b: &[f64], s_min: f64, tol: f64) -> Option<f64> {
    let mut lo = s_min;
    let mut hi = 1.0f64;
    for k in 0..p.len() {
        let c = p[k] - a[k];
        let d = b[k] - a[k];
        if d == 0.0 {
            if c.abs() > tol {
                return None;
            }
        } else {
            let (e0, e1) = ((c - tol) / d, (c + tol) / d);
            lo = lo.max(e0.min(e1));
            hi = hi.min(e0.max(e1));
        }
        if lo > hi {
            return None;
        }
    }
    Some(lo)
}

/// Finite ordered subset of a completed graph: points that lie on the
/// polyline (within its tolerance) in traversal order, pinned to the graph's
/// endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedSubset {
    points: Vec<Vec<f64>>,
    positions: Vec<GraphPos>,
}

impl OrderedSubset {
    /// Validates `points` against `graph`: dimensions, membership, traversal
    /// order, and endpoint pinning. The membership walk is a single cursor
    /// pass, so a point that appears on the graph but behind the cursor is
    /// rejected as out of order.
    pub fn new(graph: &CompletedGraph, points: Vec<Vec<f64>>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidSubset(format!(
                "subset needs at least the two endpoint points, got {}",
                points.len()
            )));
        }
        let tol = graph.tolerance();
        let width = graph.dim() + 1;
        let mut positions = Vec::with_capacity(points.len());
        let mut cursor = GraphPos { seg: 0, s: 0.0 };
        for (i, p) in points.iter().enumerate() {
            if p.len() != width {
                return Err(Error::InvalidSubset(format!(
                    "subset point {i} has {} coordinates, expected {width}",
                    p.len()
                )));
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidSubset(format!(
                    "subset point {i} has a non-finite coordinate"
                )));
            }
            match graph.locate_from(p, cursor, tol) {
                Some(pos) => {
                    positions.push(pos);
                    cursor = pos;
                }
                None => {
                    return Err(Error::InvalidSubset(format!(
                        "subset point {i} is off the graph or out of traversal order"
                    )));
                }
            }
        }
        if sup_dist(&points[0], graph.start()) > tol {
            return Err(Error::InvalidSubset(
                "subset must start at the graph's initial point".into(),
            ));
        }
        if sup_dist(points.last().unwrap(), graph.end()) > tol {
            return Err(Error::InvalidSubset(
                "subset must end at the graph's final point".into(),
            ));
        }
        Ok(OrderedSubset { points, positions })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub(crate) fn positions(&self) -> &[GraphPos] {
        &self.positions
    }
}

/// Spread of an ordered subset over its graph: the largest sup distance from
/// a graph point to either of the two subset points bracketing it,
/// maximized over the graph.
///
/// Exact: `z -> max(|z - p|, |z - q|)` is convex along each polyline
/// segment, so the sup over an arc is attained at the arc ends or at
/// polyline vertices interior to the arc.
pub fn order_consistent_distance(graph: &CompletedGraph, subset: &OrderedSubset) -> Result<f64> {
    // Revalidate so the result never depends on where the subset came from.
    let checked = OrderedSubset::new(graph, subset.points().to_vec())?;
    Ok(arc_costs(graph, &checked)
        .into_iter()
        .fold(0.0f64, f64::max))
}

/// Per-arc sup of `max(|z - p|, |z - q|)` for each consecutive subset pair
/// `(p, q)`. The subset must have been validated against `graph`.
pub(crate) fn arc_costs(graph: &CompletedGraph, subset: &OrderedSubset) -> Vec<f64> {
    let pts = subset.points();
    let pos = subset.positions();
    let mut costs = Vec::with_capacity(pts.len().saturating_sub(1));
    for w in 0..pts.len() - 1 {
        let (p, q) = (&pts[w], &pts[w + 1]);
        let mut arc = sup_dist(p, q);
        for j in pos[w].seg + 1..=pos[w + 1].seg {
            let v = &graph.points()[j];
            arc = arc.max(sup_dist(v, p).max(sup_dist(v, q)));
        }
        costs.push(arc);
    }
    costs
}

/// Index-wise sup distance between two equally sized ordered subsets.
pub fn subset_distance(a: &OrderedSubset, b: &OrderedSubset) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidSubset(format!(
            "subsets have different sizes: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let mut worst = 0.0f64;
    for (p, q) in a.points().iter().zip(b.points()) {
        worst = worst.max(sup_dist(p, q));
    }
    Ok(worst)
}
