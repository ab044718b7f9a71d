//! Path-space metrics: completed graphs, ordered subsets with the
//! order-consistent spread, bracketed M1/J1 distances, the exact uniform
//! distance, and convergence certificates built on ordered subsets.
//!
//! Every distance returns a `(lower, upper)` bracket. The continuous
//! optimizations behind M1 and J1 are infinite-dimensional, so honest
//! numerics keep two-sided bounds; wherever an exact value is computable
//! (step-step J1, Frechet search resolving at a candidate) the bracket
//! collapses to a point.

mod certificate;
mod frechet;
mod graph;
mod j1;

pub use certificate::{
    build_m1_certificate, check_certificate, CertificateOutcome, M1Certificate, SubsetBounds,
};
pub use frechet::m1_distance;
pub use graph::{order_consistent_distance, subset_distance, CompletedGraph, OrderedSubset};
pub use j1::{j1_distance, uniform_distance};

use crate::path::CadlagPath;
use crate::{Error, Result};

/// Decides distances on `[0, t_max]`. A cut at a jump time makes the
/// restriction ambiguous, so such a `t_max` is pushed to the next multiple of
/// `step` that avoids every jump of the given paths.
pub(crate) fn nudge_t(paths: &[&CadlagPath], t_max: f64, step: f64) -> Result<f64> {
    if !(step > 0.0) {
        return Err(Error::Domain(format!("step must be > 0, got {step}")));
    }
    let in_disc = |t: f64| {
        paths
            .iter()
            .any(|p| p.discontinuities().iter().any(|j| j.time == t))
    };
    if !in_disc(t_max) {
        return Ok(t_max);
    }
    let limit = paths
        .iter()
        .map(|p| p.horizon())
        .fold(f64::INFINITY, f64::min);
    let mut k = 1u64;
    loop {
        let t = t_max + k as f64 * step;
        if t > limit {
            return Err(Error::Domain(format!(
                "cannot move the cut {t_max} past a jump without leaving the domain (limit {limit})"
            )));
        }
        if !in_disc(t) {
            return Ok(t);
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nudge_skips_jump_times() {
        let p = CadlagPath::scalar_step(4.0, &[(0.0, 0.0), (1.0, 5.0), (3.0, 2.0)]).unwrap();
        assert_eq!(nudge_t(&[&p], 2.0, 0.5).unwrap(), 2.0);
        assert_eq!(nudge_t(&[&p], 1.0, 0.5).unwrap(), 1.5);
        assert_eq!(nudge_t(&[&p], 3.0, 0.5).unwrap(), 3.5);
        assert!(nudge_t(&[&p], 3.0, 2.0).is_err());
    }
}
