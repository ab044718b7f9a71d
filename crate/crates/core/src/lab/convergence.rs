//! Marginal-convergence experiment: two-sample KS statistics between scaled
//! walk marginals and limit-walk marginals, across a ladder of scales.
//!
//! Weak convergence on path space is not directly testable, so the runner
//! compares fixed-time marginal samples instead: for each scale `n` it draws
//! a walk ensemble, evaluates every replicate at the configured times, and
//! measures the exact KS distance to an equally sized ensemble drawn from
//! the limit walk. The statistic should fall as `n` grows and end below the
//! asymptotic 1% critical value; both checks are computed from the data,
//! never assumed.

use crate::ctrw::{cpctrw_path, ctrw_path, sample_renewal_pair_with};
use crate::lab::{ks_critical_1pct, ks_statistic, ExperimentConfig, WalkKind};
use crate::limit_process::{limit_cpctrw, limit_ctrw, sample_limit_pair_with};
use crate::samplers::replicate_rng;
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// One (scale, time) comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KsCell {
    pub n: usize,
    pub t: f64,
    pub ks: f64,
    pub critical_1pct: f64,
    pub below_critical: bool,
}

/// Trend of the KS statistic across the scale ladder at one time.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrendFlag {
    pub t: f64,
    /// Statistic never increases from one scale to the next.
    pub nonincreasing: bool,
    /// Statistic at the largest scale sits below the 1% critical value.
    pub final_below_critical: bool,
}

/// Full, reproducible record of one convergence run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub config: ExperimentConfig,
    pub crate_version: String,
    pub rng_identifier: String,
    pub method_note: String,
    pub cells: Vec<KsCell>,
    pub trends: Vec<TrendFlag>,
}

impl ConvergenceReport {
    pub fn all_trends_hold(&self) -> bool {
        !self.trends.is_empty()
            && self
                .trends
                .iter()
                .all(|f| f.nonincreasing && f.final_below_critical)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Cell table, one row per (scale, time).
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "n,t,ks,critical_1pct,below_critical")?;
        for c in &self.cells {
            writeln!(w, "{},{},{},{},{}", c.n, c.t, c.ks, c.critical_1pct, c.below_critical)?;
        }
        Ok(())
    }
}

const METHOD_NOTE: &str = "fixed-time marginal KS against an equally sized limit-walk ensemble; \
a distributional surrogate for path-space convergence. The critical value is the asymptotic \
two-sample 1% level.";

fn marginals_of<F>(replicates: usize, eval_times: &[f64], sample_one: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(usize) -> Result<Vec<f64>> + Sync,
{
    // One row per replicate, one column per evaluation time; transposed on
    // return so each time owns a contiguous sample.
    let rows: Vec<Vec<f64>> = (0..replicates)
        .into_par_iter()
        .map(&sample_one)
        .collect::<Result<Vec<_>>>()?;
    Ok((0..eval_times.len())
        .map(|i| rows.iter().map(|r| r[i]).collect())
        .collect())
}

/// Runs the full experiment described by `config`.
///
/// Walk replicate `r` draws from RNG stream `r` of the seed at every scale
/// (common random numbers across the ladder); limit replicate `r` draws from
/// stream `replicates + r`, so the two ensembles never share a stream.
pub fn run_marginal_convergence(config: &ExperimentConfig) -> Result<ConvergenceReport> {
    config.validate()?;
    if config.replicates < 100 {
        return Err(Error::InvalidConfig(
            "KS comparisons need at least 100 replicates".into(),
        ));
    }
    if config.model.dim != 1 {
        return Err(Error::InvalidConfig(
            "marginal convergence compares scalar walks; set dim = 1".into(),
        ));
    }
    let reps = config.replicates;
    let times = &config.eval_times;

    let limit_marginals = marginals_of(reps, times, |rep| {
        let mut rng = replicate_rng(config.seed, (reps + rep) as u64);
        let (a, d) = sample_limit_pair_with(&config.limit, &mut rng)?;
        let path = match config.walk {
            WalkKind::Ctrw => limit_ctrw(&a, &d)?,
            WalkKind::Cpctrw => limit_cpctrw(&a, &d)?,
            other => {
                return Err(Error::InvalidConfig(format!(
                    "convergence runner supports walk = ctrw or cpctrw, got {other}"
                )))
            }
        };
        times.iter().map(|&t| Ok(path.eval(t)?[0])).collect()
    })?;

    let mut cells = Vec::with_capacity(config.n_values.len() * times.len());
    for &n in &config.n_values {
        let walk_marginals = marginals_of(reps, times, |rep| {
            let mut rng = replicate_rng(config.seed, rep as u64);
            let pair = sample_renewal_pair_with(&config.model, n, config.horizon, &mut rng)?;
            let path = match config.walk {
                WalkKind::Ctrw => ctrw_path(&pair, config.horizon)?,
                _ => cpctrw_path(&pair, config.horizon)?,
            };
            times.iter().map(|&t| Ok(path.eval(t)?[0])).collect()
        })?;
        for (i, &t) in times.iter().enumerate() {
            let ks = ks_statistic(&walk_marginals[i], &limit_marginals[i])?;
            let critical_1pct = ks_critical_1pct(reps, reps);
            cells.push(KsCell { n, t, ks, critical_1pct, below_critical: ks < critical_1pct });
        }
    }

    let trends = times
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            // Cells are laid out scale-major, so time i recurs with stride
            // times.len().
            let ladder: Vec<&KsCell> =
                cells.iter().skip(i).step_by(times.len()).collect();
            TrendFlag {
                t,
                nonincreasing: ladder.windows(2).all(|w| w[1].ks <= w[0].ks),
                final_below_critical: ladder.last().is_some_and(|c| c.below_critical),
            }
        })
        .collect();

    Ok(ConvergenceReport {
        config: config.clone(),
        crate_version: env!("CARGO_PKG_VERSION").to_string(),
        rng_identifier: format!(
            "chacha12 streams of the config seed: walk replicate r uses stream r at every scale; \
limit replicate r uses stream {reps} + r"
        ),
        method_note: METHOD_NOTE.to_string(),
        cells,
        trends,
    })
}
