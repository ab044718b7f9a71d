//! Experiment laboratory: marginal-convergence studies, the worked
//! counterexample family, randomized invariant suites, and the statistics
//! and persistence they share.
//!
//! Everything here is a pure function of `(config, seed)`: replicates draw
//! from per-index RNG streams, reports embed the full configuration plus
//! generator identifiers and carry no timestamps, so reruns are byte
//! identical.

pub mod config;
pub mod convergence;
pub mod example1;
pub mod properties;

pub use config::ExperimentConfig;
pub use convergence::{run_marginal_convergence, ConvergenceReport, KsCell, TrendFlag};
pub use example1::{
    example_limit_path, example_member_path, run_example1, run_tracking_sequences,
    tracking_base_path, tracking_member_path, Example1Report, SequenceFamily, TrackingReport,
    EXAMPLE_FIRST_MEMBER,
};
pub use properties::{
    run_property_suites, suite_inverse_composition, suite_plateau_boundaries, suite_stair_set,
    suite_stair_set_with, suite_walk_identities, suite_walk_identities_with, PropertyReport,
    SuiteResult,
};

use crate::ctrw::{cpctrw_path, ctrw_path, octrw_path, sample_renewal_pair_with};
use crate::limit_process::{limit_cpctrw, limit_ctrw, sample_limit_pair_with};
use crate::path::CadlagPath;
use crate::samplers::replicate_rng;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Two-sample Kolmogorov-Smirnov statistic: the exact sup-difference of the
/// empirical CDFs, computed by a sorted merge (no binning).
pub fn ks_statistic(sample1: &[f64], sample2: &[f64]) -> Result<f64> {
    if sample1.is_empty() || sample2.is_empty() {
        return Err(Error::Domain("KS statistic needs nonempty samples".into()));
    }
    if sample1.iter().chain(sample2).any(|v| !v.is_finite()) {
        return Err(Error::Domain("KS statistic needs finite samples".into()));
    }
    let mut xs = sample1.to_vec();
    let mut ys = sample2.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let (n, m) = (xs.len(), ys.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < n || j < m {
        let v = match (xs.get(i), ys.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        while i < n && xs[i] <= v {
            i += 1;
        }
        while j < m && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    Ok(d)
}

/// Asymptotic two-sample KS critical value at the 1% level,
/// `c(0.01) * sqrt((n1 + n2) / (n1 * n2))` with `c(0.01) = 1.6276`.
pub fn ks_critical_1pct(n1: usize, n2: usize) -> f64 {
    1.6276 * ((n1 + n2) as f64 / (n1 as f64 * n2 as f64)).sqrt()
}

/// Which walk an ensemble simulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WalkKind {
    Ctrw,
    Octrw,
    Cpctrw,
    LimitCtrw,
    LimitCpctrw,
}

impl std::str::FromStr for WalkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<WalkKind> {
        match s {
            "ctrw" => Ok(WalkKind::Ctrw),
            "octrw" => Ok(WalkKind::Octrw),
            "cpctrw" => Ok(WalkKind::Cpctrw),
            "limit-ctrw" => Ok(WalkKind::LimitCtrw),
            "limit-cpctrw" => Ok(WalkKind::LimitCpctrw),
            other => Err(Error::InvalidConfig(format!(
                "unknown walk kind {other:?}; expected ctrw, octrw, cpctrw, limit-ctrw or limit-cpctrw"
            ))),
        }
    }
}

impl std::fmt::Display for WalkKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            WalkKind::Ctrw => "ctrw",
            WalkKind::Octrw => "octrw",
            WalkKind::Cpctrw => "cpctrw",
            WalkKind::LimitCtrw => "limit-ctrw",
            WalkKind::LimitCpctrw => "limit-cpctrw",
        };
        f.write_str(s)
    }
}

/// Seeded collection of sample paths of one walk plus the marginals
/// extracted at the evaluation times.
///
/// `marginals[i][r]` is the full value vector of replicate `r` at
/// `eval_times[i]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathEnsemble {
    pub kind: WalkKind,
    /// Scale index `n`; absent for limit walks.
    pub n: Option<usize>,
    pub seed: u64,
    pub replicates: usize,
    pub eval_times: Vec<f64>,
    pub paths: Vec<CadlagPath>,
    pub marginals: Vec<Vec<Vec<f64>>>,
}

impl PathEnsemble {
    /// One path per line, each a self-contained JSON document.
    pub fn write_jsonl<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        for path in &self.paths {
            writeln!(w, "{}", path.to_json_string())?;
        }
        Ok(())
    }

    /// Marginal table: one row per replicate, one column per evaluation time
    /// and coordinate.
    pub fn write_marginals_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        let dim = self.marginals.first().and_then(|m| m.first()).map_or(1, Vec::len);
        let mut header = String::from("replicate");
        for t in &self.eval_times {
            for c in 0..dim {
                header.push_str(&format!(",t{t}_c{c}"));
            }
        }
        writeln!(w, "{header}")?;
        for r in 0..self.replicates {
            let mut row = r.to_string();
            for cell in self.marginals.iter().map(|per_time| &per_time[r]) {
                for v in cell {
                    row.push_str(&format!(",{v}"));
                }
            }
            writeln!(w, "{row}")?;
        }
        Ok(())
    }
}

/// Simulates a replicate ensemble of one walk kind.
///
/// Walk replicates draw from RNG streams `0..replicates` of the seed, so the
/// ensemble for scale `n` is coupled replicate-by-replicate with the ensemble
/// for any other scale (common random numbers); limit walks use the same
/// streams but are independent processes.
pub fn simulate_ensemble(
    config: &ExperimentConfig,
    kind: WalkKind,
    n: usize,
    replicates: usize,
) -> Result<PathEnsemble> {
    if replicates == 0 {
        return Err(Error::InvalidConfig("replicates must be positive".into()));
    }
    let mut paths = Vec::with_capacity(replicates);
    for rep in 0..replicates {
        let mut rng = replicate_rng(config.seed, rep as u64);
        let path = match kind {
            WalkKind::Ctrw | WalkKind::Octrw | WalkKind::Cpctrw => {
                let pair = sample_renewal_pair_with(&config.model, n, config.horizon, &mut rng)?;
                match kind {
                    WalkKind::Ctrw => ctrw_path(&pair, config.horizon)?,
                    WalkKind::Octrw => octrw_path(&pair, config.horizon)?,
                    _ => cpctrw_path(&pair, config.horizon)?,
                }
            }
            WalkKind::LimitCtrw | WalkKind::LimitCpctrw => {
                let (a, d) = sample_limit_pair_with(&config.limit, &mut rng)?;
                if kind == WalkKind::LimitCtrw {
                    limit_ctrw(&a, &d)?
                } else {
                    limit_cpctrw(&a, &d)?
                }
            }
        };
        paths.push(path);
    }
    let marginals = config
        .eval_times
        .iter()
        .map(|&t| paths.iter().map(|p| p.eval(t)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(PathEnsemble {
        kind,
        n: match kind {
            WalkKind::LimitCtrw | WalkKind::LimitCpctrw => None,
            _ => Some(n),
        },
        seed: config.seed,
        replicates,
        eval_times: config.eval_times.clone(),
        paths,
        marginals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ctrw::{CtrwModel, JumpDist, WaitDist};

    #[test]
    fn ks_statistic_frozen_values() {
        let a = [1.0, 2.0, 3.0];
        assert_eq!(ks_statistic(&a, &a).unwrap(), 0.0);
        let b = [1.5, 2.5, 3.5];
        assert!((ks_statistic(&a, &b).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let lo = [0.0, 0.1, 0.2];
        let hi = [5.0, 6.0];
        assert_eq!(ks_statistic(&lo, &hi).unwrap(), 1.0);
        assert!(ks_statistic(&[], &a).is_err());
        assert!(ks_statistic(&a, &[f64::NAN]).is_err());
    }

    #[test]
    fn ks_handles_ties_across_samples() {
        // F1 and F2 both step at the shared value 2.0; counting one side
        // before the other would overstate the gap.
        let a = [1.0, 2.0, 2.0, 4.0];
        let b = [2.0, 3.0];
        // At v=1: 1/4 vs 0; v=2: 3/4 vs 1/2; v=3: 3/4 vs 1; v=4: 1 vs 1.
        assert!((ks_statistic(&a, &b).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn ks_critical_matches_the_tabulated_constant() {
        let c = ks_critical_1pct(10_000, 10_000);
        assert!((c - 0.0230).abs() < 2e-4, "critical {c}");
    }

    #[test]
    fn degenerate_walk_matches_its_exact_limit() {
        // Unit jumps and unit waits at drift scaling: every replicate of the
        // continuous walk is exactly the identity, so its marginal at any
        // renewal-resolved time matches the deterministic limit value with a
        // KS statistic of exactly zero.
        let model = CtrwModel::new(
            1,
            JumpDist::Deterministic { value: 1.0 },
            WaitDist::Deterministic { value: 1.0 },
        )
        .unwrap()
        .with_exponents(1.0, 1.0)
        .unwrap();
        let config = ExperimentConfig::degenerate_for_tests(model, 1.0, vec![0.5, 1.0], 9);
        let ens = simulate_ensemble(&config, WalkKind::Cpctrw, 4, 120).unwrap();
        for (i, &t) in ens.eval_times.iter().enumerate() {
            let walk: Vec<f64> = ens.marginals[i].iter().map(|v| v[0]).collect();
            let limit = vec![t; walk.len()];
            assert_eq!(ks_statistic(&walk, &limit).unwrap(), 0.0);
        }
    }

    #[test]
    fn ensembles_are_reproducible_and_serializable() {
        let model = CtrwModel::new(1, JumpDist::Gaussian, WaitDist::Exponential).unwrap();
        let config = ExperimentConfig::degenerate_for_tests(model, 1.0, vec![0.5], 3);
        let a = simulate_ensemble(&config, WalkKind::Ctrw, 5, 8).unwrap();
        let b = simulate_ensemble(&config, WalkKind::Ctrw, 5, 8).unwrap();
        let mut ja = Vec::new();
        let mut jb = Vec::new();
        a.write_jsonl(&mut ja).unwrap();
        b.write_jsonl(&mut jb).unwrap();
        assert_eq!(ja, jb);
        assert_eq!(ja.split(|&c| c == b'\n').count(), 9);
        let mut csv = Vec::new();
        a.write_marginals_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("replicate,t0.5_c0\n"));
        assert_eq!(text.lines().count(), 9);
    }
}
