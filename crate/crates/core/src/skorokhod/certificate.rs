//! Convergence certificates: finite ordered-subset witnesses that a path
//! sequence tracks a limit path within a stated resolution.
//!
//! A certificate carries an ordered subset `a` on the limit's completed
//! graph whose spread is below `epsilon`, one subset `a_n` per sequence
//! member, and an index `n1` from which every member subset has spread
//! below `epsilon` on its own graph and sits within `epsilon` of `a`
//! index-wise. The checker revalidates everything from the raw points, so
//! a certificate is evidence independent of how it was produced. The
//! builder is a documented greedy heuristic: failure to build one is
//! reported with the achieved bounds, not as proof that none exists.

use serde::{Deserialize, Serialize};

use super::frechet::min_dist_on_segment;
use super::graph::{
    arc_costs, order_consistent_distance, subset_distance, CompletedGraph, GraphPos,
    OrderedSubset,
};
use super::nudge_t;
use crate::path::{CadlagPath, Jump};
use crate::{Error, Result};

/// Hard cap on subset refinement, bounding the loop on degenerate inputs.
const MAX_SUBSET_POINTS: usize = 20_000;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct M1Certificate {
    pub epsilon: f64,
    /// Comparison horizon; already moved off every jump time involved.
    pub t_max: f64,
    /// Ordered subset on the limit graph, each point stored `[t, v_1, ..]`.
    pub a: Vec<Vec<f64>>,
    /// One ordered subset per sequence member, same layout and same size
    /// as `a`.
    pub a_n: Vec<Vec<Vec<f64>>>,
    /// 1-based sequence index from which the member bounds all hold.
    pub n1: usize,
}

/// Bounds achieved by one sequence member's subset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubsetBounds {
    /// 1-based position in the sequence.
    pub n: usize,
    /// Order-consistent spread of the member subset over its own graph.
    pub spread: f64,
    /// Index-wise distance between the base subset and the member subset.
    pub offset: f64,
}

/// What the certificate builder produced. `Failed` is a value, not an
/// error: it reports the bounds the greedy construction reached.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum CertificateOutcome {
    Found(M1Certificate),
    Failed {
        /// Spread of the base subset on the limit graph.
        base_spread: f64,
        bounds: Vec<SubsetBounds>,
    },
}

impl CertificateOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, CertificateOutcome::Found(_))
    }
}

/// Start of the constant stretch a jump at `tau` terminates:
/// `sup { s < tau : x(s) != x(tau-) }`, clamped to knot times.
fn plateau_start(x: &CadlagPath, tau: f64) -> f64 {
    let times = x.knot_times();
    let k = times.partition_point(|&u| u < tau);
    if k == 0 || k >= times.len() || times[k] != tau {
        return tau;
    }
    let before = x.knot_value(k - 1).to_vec();
    let mut i = k - 1;
    while i > 0 && x.segment_is_const(i - 1) && x.knot_value(i - 1) == before.as_slice() {
        i -= 1;
    }
    times[i]
}

fn graph_point(t: f64, v: &[f64]) -> Vec<f64> {
    let mut p = Vec::with_capacity(v.len() + 1);
    p.push(t);
    p.extend_from_slice(v);
    p
}

/// Base subset on the limit graph: endpoints, the two anchor points of
/// every large jump (plateau start at the pre-jump value, jump top), then
/// arc splitting until the spread drops below `epsilon`.
///
/// Returns the points with jump tops tagged by their index into `jumps`.
fn build_base_subset(
    graph: &CompletedGraph,
    x: &CadlagPath,
    jumps: &[Jump],
    epsilon: f64,
) -> Result<(Vec<(Vec<f64>, Option<usize>)>, f64)> {
    let mut tagged: Vec<(Vec<f64>, Option<usize>)> = vec![(graph.start().to_vec(), None)];
    let push = |pt: Vec<f64>, tag: Option<usize>, tagged: &mut Vec<(Vec<f64>, Option<usize>)>| {
        if let Some(last) = tagged.last_mut() {
            if last.0 == pt {
                last.1 = last.1.or(tag);
                return;
            }
        }
        tagged.push((pt, tag));
    };
    for (ji, j) in jumps.iter().enumerate() {
        let s_star = plateau_start(x, j.time);
        push(graph_point(s_star, &j.left), None, &mut tagged);
        push(graph_point(j.time, &j.right), Some(ji), &mut tagged);
    }
    push(graph.end().to_vec(), None, &mut tagged);

    loop {
        let subset = OrderedSubset::new(graph, tagged.iter().map(|(p, _)| p.clone()).collect())?;
        let costs = arc_costs(graph, &subset);
        let worst = costs.iter().copied().fold(0.0f64, f64::max);
        if worst < epsilon {
            return Ok((tagged, worst));
        }
        let pos = subset.positions().to_vec();
        let tol = graph.tolerance();
        let usable = |cand: &[f64], p: &[f64], q: &[f64]| {
            crate::path::sup_dist(cand, p) > tol && crate::path::sup_dist(cand, q) > tol
        };
        let mut refined: Vec<(Vec<f64>, Option<usize>)> =
            Vec::with_capacity(tagged.len() * 2);
        for w in 0..tagged.len() - 1 {
            refined.push(tagged[w].clone());
            if costs[w] < epsilon {
                continue;
            }
            // Split the arc at its worst interior vertex; with none
            // available, halve whichever partial segment the arc covers.
            let p = &tagged[w].0;
            let q = &tagged[w + 1].0;
            let (pw, qw) = (pos[w], pos[w + 1]);
            let mut split: Option<Vec<f64>> = None;
            let mut split_score = f64::NEG_INFINITY;
            for j in pw.seg + 1..=qw.seg {
                let v = &graph.points()[j];
                if !usable(v, p, q) {
                    continue;
                }
                let score = crate::path::sup_dist(v, p).max(crate::path::sup_dist(v, q));
                if score > split_score {
                    split_score = score;
                    split = Some(v.clone());
                }
            }
            if split.is_none() {
                let mut candidates = Vec::new();
                if pw.seg == qw.seg {
                    candidates.push(GraphPos {
                        seg: pw.seg,
                        s: 0.5 * (pw.s + qw.s),
                    });
                } else {
                    candidates.push(GraphPos {
                        seg: qw.seg,
                        s: 0.5 * qw.s,
                    });
                    candidates.push(GraphPos {
                        seg: pw.seg,
                        s: 0.5 * (pw.s + 1.0),
                    });
                    for seg in pw.seg + 1..qw.seg {
                        candidates.push(GraphPos { seg, s: 0.5 });
                    }
                }
                split = candidates
                    .into_iter()
                    .map(|c| graph.point_at(c))
                    .find(|cand| usable(cand, p, q));
            }
            if let Some(pt) = split {
                refined.push((pt, None));
            }
        }
        refined.push(tagged.last().unwrap().clone());
        if refined.len() == tagged.len() {
            // No arc could be split further; the spread cannot improve.
            return Ok((tagged, worst));
        }
        if refined.len() > MAX_SUBSET_POINTS {
            return Err(Error::Domain(format!(
                "subset refinement exceeded {MAX_SUBSET_POINTS} points without reaching spread {epsilon}"
            )));
        }
        tagged = refined;
    }
}

/// Position and point of the best sup-norm projection of `p` onto the jump
/// vertical of `jump` in `graph`, if that vertical is present.
fn project_onto_vertical(
    graph: &CompletedGraph,
    jump: &Jump,
    p: &[f64],
) -> Option<(GraphPos, Vec<f64>)> {
    let pts = graph.points();
    for seg in 0..pts.len().saturating_sub(1) {
        let (a, b) = (&pts[seg], &pts[seg + 1]);
        if a[0] == jump.time
            && b[0] == jump.time
            && a[1..] == jump.left[..]
            && b[1..] == jump.right[..]
        {
            let (s, _) = min_dist_on_segment(p, a, b, 0.0);
            let pos = GraphPos { seg, s };
            return Some((pos, graph.point_at(pos)));
        }
    }
    None
}

/// Nearest large jump of the member path to `tau`, within `epsilon` in
/// time; earlier jump wins ties.
fn match_jump<'a>(member_jumps: &'a [Jump], tau: f64, epsilon: f64) -> Option<&'a Jump> {
    let mut best: Option<&Jump> = None;
    for j in member_jumps {
        let gap = (j.time - tau).abs();
        if gap > epsilon {
            continue;
        }
        best = match best {
            None => Some(j),
            Some(b) => {
                let bg = (b.time - tau).abs();
                if gap < bg || (gap == bg && j.time < b.time) {
                    Some(j)
                } else {
                    Some(b)
                }
            }
        };
    }
    best
}

/// Builds a certificate for the sequence `xs` against the limit `x` on
/// `[0, t_max]` at resolution `epsilon`.
///
/// The member subsets are greedy: endpoints are pinned, large-jump tops are
/// projected onto the time-matched jump vertical of the member (kept only
/// if that respects traversal order), and every other point takes its
/// earliest best projection at or after the running cursor. `mesh` is the
/// step used to move `t_max` off jump times.
pub fn build_m1_certificate(
    x: &CadlagPath,
    xs: &[CadlagPath],
    t_max: f64,
    epsilon: f64,
    mesh: f64,
) -> Result<CertificateOutcome> {
    if !(epsilon > 0.0) {
        return Err(Error::Domain(format!(
            "resolution must be > 0, got {epsilon}"
        )));
    }
    if xs.is_empty() {
        return Err(Error::Domain("certificate needs a nonempty sequence".into()));
    }
    if xs.iter().any(|p| p.dim() != x.dim()) {
        return Err(Error::Domain("dimension mismatch in sequence".into()));
    }
    let mut all: Vec<&CadlagPath> = vec![x];
    all.extend(xs.iter());
    let t = nudge_t(&all, t_max, mesh)?;

    let graph = CompletedGraph::new(x, t)?;
    let jumps = x.large_jumps(epsilon, t)?;
    let (tagged, base_spread) = build_base_subset(&graph, x, &jumps, epsilon)?;
    let base_points: Vec<Vec<f64>> = tagged.iter().map(|(p, _)| p.clone()).collect();
    let base_subset = OrderedSubset::new(&graph, base_points.clone())?;

    let mut bounds = Vec::with_capacity(xs.len());
    let mut member_subsets = Vec::with_capacity(xs.len());
    for (k, xn) in xs.iter().enumerate() {
        let gn = CompletedGraph::new(xn, t)?;
        let member_jumps = xn.large_jumps(epsilon, t)?;
        let mut pts = Vec::with_capacity(tagged.len());
        let mut cursor = GraphPos { seg: 0, s: 0.0 };
        for (idx, (p, tag)) in tagged.iter().enumerate() {
            if idx == 0 {
                pts.push(gn.start().to_vec());
                continue;
            }
            if idx == tagged.len() - 1 {
                pts.push(gn.end().to_vec());
                continue;
            }
            let mut chosen: Option<Vec<f64>> = None;
            if let Some(ji) = tag {
                if let Some(mj) = match_jump(&member_jumps, jumps[*ji].time, epsilon) {
                    if let Some((pos, pt)) = project_onto_vertical(&gn, mj, p) {
                        if pos.at_or_after(cursor) {
                            cursor = pos;
                            chosen = Some(pt);
                        }
                    }
                }
            }
            let pt = match chosen {
                Some(pt) => pt,
                None => {
                    let (pos, _) = gn.project_from(p, cursor);
                    cursor = pos;
                    gn.point_at(pos)
                }
            };
            pts.push(pt);
        }
        let sub = OrderedSubset::new(&gn, pts.clone())?;
        let spread = order_consistent_distance(&gn, &sub)?;
        let offset = subset_distance(&base_subset, &sub)?;
        bounds.push(SubsetBounds {
            n: k + 1,
            spread,
            offset,
        });
        member_subsets.push(pts);
    }

    let good = |b: &SubsetBounds| b.spread < epsilon && b.offset < epsilon;
    let n1 = (0..bounds.len()).find(|&s| bounds[s..].iter().all(good));
    let n1 = match n1 {
        Some(s) if base_spread < epsilon => s + 1,
        _ => {
            return Ok(CertificateOutcome::Failed {
                base_spread,
                bounds,
            });
        }
    };
    let cert = M1Certificate {
        epsilon,
        t_max: t,
        a: base_points,
        a_n: member_subsets,
        n1,
    };
    // The checker has the final word even on our own output.
    if check_certificate(x, xs, &cert)? {
        Ok(CertificateOutcome::Found(cert))
    } else {
        Ok(CertificateOutcome::Failed {
            base_spread,
            bounds,
        })
    }
}

/// Revalidates a certificate from its raw points: subset membership and
/// order on the actual graphs, base spread below `epsilon`, and for every
/// member from `n1` on, member spread and index-wise distance below
/// `epsilon`. Returns `Ok(false)` when a bound fails; errors when the
/// points do not form ordered subsets at all.
pub fn check_certificate(
    x: &CadlagPath,
    xs: &[CadlagPath],
    cert: &M1Certificate,
) -> Result<bool> {
    if cert.a_n.len() != xs.len() {
        return Err(Error::Domain(format!(
            "certificate covers {} members, sequence has {}",
            cert.a_n.len(),
            xs.len()
        )));
    }
    if cert.n1 == 0 || cert.n1 > xs.len() {
        return Err(Error::Domain(format!(
            "start index {} outside the sequence of length {}",
            cert.n1,
            xs.len()
        )));
    }
    let graph = CompletedGraph::new(x, cert.t_max)?;
    let base = OrderedSubset::new(&graph, cert.a.clone())?;
    if order_consistent_distance(&graph, &base)? >= cert.epsilon {
        return Ok(false);
    }
    for (k, xn) in xs.iter().enumerate().skip(cert.n1 - 1) {
        let gn = CompletedGraph::new(xn, cert.t_max)?;
        let sub = OrderedSubset::new(&gn, cert.a_n[k].clone())?;
        if order_consistent_distance(&gn, &sub)? >= cert.epsilon {
            return Ok(false);
        }
        if subset_distance(&base, &sub)? >= cert.epsilon {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_step() -> CadlagPath {
        CadlagPath::scalar_step(4.0, &[(0.0, 0.0), (1.0, 1.0), (3.0, 2.5)]).unwrap()
    }

    #[test]
    fn constant_sequence_certifies_from_the_start() {
        let x = two_step();
        let xs = vec![x.clone(), x.clone(), x.clone()];
        let out = build_m1_certificate(&x, &xs, 4.0, 0.2, 0.05).unwrap();
        match out {
            CertificateOutcome::Found(cert) => {
                assert_eq!(cert.n1, 1);
                assert_eq!(cert.a_n.len(), 3);
                for sub in &cert.a_n {
                    assert_eq!(sub, &cert.a);
                }
                assert!(check_certificate(&x, &xs, &cert).unwrap());
            }
            CertificateOutcome::Failed { .. } => panic!("constant sequence must certify"),
        }
    }

    #[test]
    fn small_time_shifts_certify_with_jump_matching() {
        let x = two_step();
        let eps = 0.2;
        let xs: Vec<CadlagPath> = (1..=6)
            .map(|n| {
                let d = 0.05 / n as f64;
                CadlagPath::scalar_step(4.0, &[(0.0, 0.0), (1.0 + d, 1.0), (3.0 + d, 2.5)])
                    .unwrap()
            })
            .collect();
        let out = build_m1_certificate(&x, &xs, 4.0, eps, 0.01).unwrap();
        match out {
            CertificateOutcome::Found(cert) => {
                assert_eq!(cert.n1, 1);
                assert!(check_certificate(&x, &xs, &cert).unwrap());
            }
            CertificateOutcome::Failed { bounds, .. } => {
                panic!("shifts within eps must certify, bounds {bounds:?}")
            }
        }
    }

    #[test]
    fn large_shift_fails_and_reports_bounds() {
        let x = two_step();
        let eps = 0.2;
        let far =
            CadlagPath::scalar_step(4.0, &[(0.0, 0.0), (1.5, 1.0), (3.5, 2.5)]).unwrap();
        let out = build_m1_certificate(&x, &[far], 4.0, eps, 0.01).unwrap();
        match out {
            CertificateOutcome::Failed { base_spread, bounds } => {
                assert!(base_spread < eps);
                assert_eq!(bounds.len(), 1);
                assert!(bounds[0].spread >= eps || bounds[0].offset >= eps);
            }
            CertificateOutcome::Found(_) => panic!("0.5 shift cannot certify at eps 0.2"),
        }
    }

    #[test]
    fn bad_suffix_blocks_the_certificate() {
        // Improving prefix, divergent tail: no all-good suffix exists.
        let x = two_step();
        let good = x.clone();
        let bad = CadlagPath::scalar_step(4.0, &[(0.0, 5.0)]).unwrap();
        let out = build_m1_certificate(&x, &[good, bad], 4.0, 0.2, 0.01).unwrap();
        assert!(!out.is_found());
    }

    #[test]
    fn checker_rejects_foreign_points() {
        let x = two_step();
        let xs = vec![x.clone()];
        let out = build_m1_certificate(&x, &xs, 4.0, 0.2, 0.05).unwrap();
        let CertificateOutcome::Found(mut cert) = out else {
            panic!("expected a certificate")
        };
        cert.a[1] = vec![0.5, 4.0];
        assert!(matches!(
            check_certificate(&x, &xs, &cert),
            Err(Error::InvalidSubset(_))
        ));
    }

    #[test]
    fn checker_rejects_weak_bounds() {
        let x = two_step();
        let xs = vec![x.clone()];
        let out = build_m1_certificate(&x, &xs, 4.0, 0.2, 0.05).unwrap();
        let CertificateOutcome::Found(mut cert) = out else {
            panic!("expected a certificate")
        };
        // Tighten the claimed resolution until the stored subsets are too
        // coarse for it.
        cert.epsilon = 1e-6;
        assert_eq!(check_certificate(&x, &xs, &cert).unwrap(), false);
    }

    #[test]
    fn plateau_start_walks_back_constant_runs() {
        let x = two_step();
        assert_eq!(plateau_start(&x, 1.0), 0.0);
        assert_eq!(plateau_start(&x, 3.0), 1.0);
        // Redundant knot inside a plateau does not stop the walk.
        let y = CadlagPath::step(
            4.0,
            vec![
                (0.0, vec![0.0]),
                (0.5, vec![0.0]),
                (1.0, vec![1.0]),
            ],
        )
        .unwrap();
        assert_eq!(plateau_start(&y, 1.0), 0.0);
    }

    #[test]
    fn serde_round_trip_preserves_the_certificate() {
        let x = two_step();
        let xs = vec![x.clone()];
        let CertificateOutcome::Found(cert) =
            build_m1_certificate(&x, &xs, 4.0, 0.2, 0.05).unwrap()
        else {
            panic!("expected a certificate")
        };
        let json = serde_json::to_string(&cert).unwrap();
        let back: M1Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back.a, cert.a);
        assert_eq!(back.a_n, cert.a_n);
        assert_eq!(back.n1, cert.n1);
        assert!(check_certificate(&x, &xs, &back).unwrap());
    }
}
