//! Experiment configuration: a flat `KEY=VALUE` text format plus the
//! validated struct the drivers consume.
//!
//! The format is deliberately small: one assignment per line, `#` starts a
//! comment, later assignments win. Unknown keys are rejected so a typo
//! cannot silently fall back to a default.

use crate::ctrw::{CtrwModel, JumpDist, WaitDist};
use crate::lab::WalkKind;
use crate::limit_process::{LimitAKind, LimitDKind, LimitModel};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Full description of one convergence experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: CtrwModel,
    pub limit: LimitModel,
    /// Which walk is compared against the limit.
    pub walk: WalkKind,
    /// Scale indices, strictly ascending.
    pub n_values: Vec<usize>,
    pub replicates: usize,
    /// Marginal evaluation times, each in `(0, horizon]`.
    pub eval_times: Vec<f64>,
    pub horizon: f64,
    pub seed: u64,
    pub output_dir: Option<String>,
}

const KNOWN_KEYS: &[&str] = &[
    "dim",
    "jump_dist",
    "wait_dist",
    "alpha",
    "beta",
    "jump_value",
    "wait_value",
    "jump_scale_exponent",
    "wait_scale_exponent",
    "n",
    "horizon",
    "replicates",
    "eval_times",
    "seed",
    "walk",
    "limit_a",
    "limit_d",
    "delta",
    "out",
];

fn bad(key: &str, detail: impl std::fmt::Display) -> Error {
    Error::InvalidConfig(format!("key {key:?}: {detail}"))
}

struct Flat(BTreeMap<String, String>);

impl Flat {
    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn required(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::InvalidConfig(format!("missing required key {key:?}")))
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|e| bad(key, e)),
        }
    }

    fn parse_required<T: std::str::FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.required(key)?.parse::<T>().map_err(|e| bad(key, e))
    }

    fn parse_list<T: std::str::FromStr>(&self, key: &str) -> Result<Vec<T>>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self.required(key)?;
        raw.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<T>().map_err(|e| bad(key, e)))
            .collect()
    }
}

fn parse_flat_map(text: &str) -> Result<Flat> {
    let mut map = BTreeMap::new();
    let mut unknown = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.split_once('#') {
            Some((head, _)) => head.trim(),
            None => raw.trim(),
        };
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidConfig(format!("line {}: expected KEY=VALUE, got {line:?}", lineno + 1))
        })?;
        let key = key.trim().to_ascii_lowercase();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            unknown.push(key.clone());
        }
        map.insert(key, value.trim().to_string());
    }
    if !unknown.is_empty() {
        return Err(Error::InvalidConfig(format!("unknown keys: {}", unknown.join(", "))));
    }
    Ok(Flat(map))
}

fn jump_dist_from(flat: &Flat) -> Result<JumpDist> {
    match flat.required("jump_dist")? {
        "gaussian" => Ok(JumpDist::Gaussian),
        "symmetric-stable" => Ok(JumpDist::SymmetricStable {
            alpha: flat.parse_required::<f64>("alpha")?,
        }),
        "deterministic" => Ok(JumpDist::Deterministic {
            value: flat.parse_required::<f64>("jump_value")?,
        }),
        other => Err(bad(
            "jump_dist",
            format!("unknown kind {other:?}; expected gaussian, symmetric-stable or deterministic"),
        )),
    }
}

fn wait_dist_from(flat: &Flat) -> Result<WaitDist> {
    match flat.required("wait_dist")? {
        "exponential" => Ok(WaitDist::Exponential),
        "pareto" => Ok(WaitDist::Pareto { beta: flat.parse_required::<f64>("beta")? }),
        "one-sided-stable" => Ok(WaitDist::OneSidedStable {
            beta: flat.parse_required::<f64>("beta")?,
        }),
        "deterministic" => Ok(WaitDist::Deterministic {
            value: flat.parse_required::<f64>("wait_value")?,
        }),
        other => Err(bad(
            "wait_dist",
            format!(
                "unknown kind {other:?}; expected exponential, pareto, one-sided-stable or deterministic"
            ),
        )),
    }
}

fn limit_model_from(flat: &Flat, horizon: f64) -> Result<LimitModel> {
    let a_kind = match flat.required("limit_a")? {
        "brownian" => LimitAKind::Brownian,
        "symmetric-stable" => LimitAKind::SymmetricStable {
            alpha: flat.parse_required::<f64>("alpha")?,
        },
        other => Err(bad(
            "limit_a",
            format!("unknown kind {other:?}; expected brownian or symmetric-stable"),
        ))?,
    };
    let d_kind = match flat.required("limit_d")? {
        "one-sided-stable" => LimitDKind::OneSidedStable {
            beta: flat.parse_required::<f64>("beta")?,
        },
        "linear-drift" => LimitDKind::LinearDrift,
        other => Err(bad(
            "limit_d",
            format!("unknown kind {other:?}; expected one-sided-stable or linear-drift"),
        ))?,
    };
    let model = LimitModel {
        a_kind,
        d_kind,
        grid_mesh: flat.parse_required::<f64>("delta")?,
        horizon,
    };
    model.validate()?;
    Ok(model)
}

impl ExperimentConfig {
    /// Parses the flat `KEY=VALUE` format.
    pub fn from_flat_str(text: &str) -> Result<ExperimentConfig> {
        let flat = parse_flat_map(text)?;
        let dim = flat.parse::<usize>("dim")?.unwrap_or(1);
        let base = CtrwModel::new(dim, jump_dist_from(&flat)?, wait_dist_from(&flat)?)?;
        let jump_exp = flat
            .parse::<f64>("jump_scale_exponent")?
            .unwrap_or(base.jump_scale_exponent);
        let wait_exp = flat
            .parse::<f64>("wait_scale_exponent")?
            .unwrap_or(base.wait_scale_exponent);
        let model = base.with_exponents(jump_exp, wait_exp)?;
        let horizon = flat.parse_required::<f64>("horizon")?;
        let limit = limit_model_from(&flat, horizon)?;
        let walk = match flat.get("walk") {
            None => WalkKind::Cpctrw,
            Some(raw) => raw.parse()?,
        };
        let config = ExperimentConfig {
            model,
            limit,
            walk,
            n_values: flat.parse_list("n")?,
            replicates: flat.parse_required("replicates")?,
            eval_times: flat.parse_list("eval_times")?,
            horizon,
            seed: flat.parse::<u64>("seed")?.unwrap_or(0),
            output_dir: flat.get("out").map(str::to_string),
        };
        config.validate()?;
        Ok(config)
    }

    /// Reads and parses a flat config file.
    pub fn from_flat_path(path: &std::path::Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)?;
        ExperimentConfig::from_flat_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.limit.validate()?;
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::InvalidConfig("horizon must be positive and finite".into()));
        }
        if (self.limit.horizon - self.horizon).abs() > 0.0 {
            return Err(Error::InvalidConfig(
                "limit horizon must equal the experiment horizon".into(),
            ));
        }
        if self.n_values.is_empty() {
            return Err(Error::InvalidConfig("n must list at least one scale".into()));
        }
        if self.n_values.windows(2).any(|w| w[1] <= w[0]) || self.n_values[0] == 0 {
            return Err(Error::InvalidConfig(
                "n must be strictly ascending positive integers".into(),
            ));
        }
        if self.eval_times.is_empty() {
            return Err(Error::InvalidConfig("eval_times must be nonempty".into()));
        }
        if self
            .eval_times
            .iter()
            .any(|&t| !t.is_finite() || t <= 0.0 || t > self.horizon)
        {
            return Err(Error::InvalidConfig(
                "eval_times must lie in (0, horizon]".into(),
            ));
        }
        if self.replicates == 0 {
            return Err(Error::InvalidConfig("replicates must be positive".into()));
        }
        Ok(())
    }

    #[cfg(test)]
    pub(crate) fn degenerate_for_tests(
        model: CtrwModel,
        horizon: f64,
        eval_times: Vec<f64>,
        seed: u64,
    ) -> ExperimentConfig {
        ExperimentConfig {
            model,
            limit: LimitModel {
                a_kind: LimitAKind::Brownian,
                d_kind: LimitDKind::LinearDrift,
                grid_mesh: 0.1,
                horizon,
            },
            walk: WalkKind::Cpctrw,
            n_values: vec![4],
            replicates: 120,
            eval_times,
            horizon,
            seed,
            output_dir: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "
        # heavy-tail experiment
        jump_dist = gaussian
        wait_dist = pareto
        beta = 0.7
        n = 100, 1000, 10000
        horizon = 1.0
        replicates = 10000
        eval_times = 0.5, 1.0
        seed = 2026
        limit_a = brownian
        limit_d = one-sided-stable
        delta = 0.001
        out = runs/heavy
    ";

    #[test]
    fn parses_the_sample_config() {
        let cfg = ExperimentConfig::from_flat_str(SAMPLE).unwrap();
        assert_eq!(cfg.model.dim, 1);
        assert!(matches!(cfg.model.jump_dist, JumpDist::Gaussian));
        assert!(matches!(cfg.model.wait_dist, WaitDist::Pareto { beta } if beta == 0.7));
        assert_eq!(cfg.model.jump_scale_exponent, 0.5);
        assert!((cfg.model.wait_scale_exponent - 1.0 / 0.7).abs() < 1e-15);
        assert_eq!(cfg.n_values, vec![100, 1000, 10000]);
        assert_eq!(cfg.eval_times, vec![0.5, 1.0]);
        assert_eq!(cfg.seed, 2026);
        assert_eq!(cfg.walk, WalkKind::Cpctrw);
        assert_eq!(cfg.output_dir.as_deref(), Some("runs/heavy"));
        assert!(matches!(cfg.limit.d_kind, LimitDKind::OneSidedStable { beta } if beta == 0.7));
        assert_eq!(cfg.limit.grid_mesh, 0.001);
        assert_eq!(cfg.limit.horizon, 1.0);
    }

    #[test]
    fn later_assignments_win() {
        let text = format!("{SAMPLE}\nseed = 7\n");
        let cfg = ExperimentConfig::from_flat_str(&text).unwrap();
        assert_eq!(cfg.seed, 7);
    }

    #[test]
    fn unknown_and_malformed_keys_are_rejected() {
        let err = ExperimentConfig::from_flat_str(&format!("{SAMPLE}\nsead = 7\n"));
        assert!(matches!(err, Err(Error::InvalidConfig(ref m)) if m.contains("sead")));
        let err = ExperimentConfig::from_flat_str(&format!("{SAMPLE}\njust a line\n"));
        assert!(matches!(err, Err(Error::InvalidConfig(ref m)) if m.contains("KEY=VALUE")));
    }

    #[test]
    fn missing_and_out_of_range_values_are_rejected() {
        let err = ExperimentConfig::from_flat_str("jump_dist = gaussian\n");
        assert!(matches!(err, Err(Error::InvalidConfig(ref m)) if m.contains("wait_dist")));

        let descending = SAMPLE.replace("n = 100, 1000, 10000", "n = 1000, 100");
        assert!(ExperimentConfig::from_flat_str(&descending).is_err());

        let late = SAMPLE.replace("eval_times = 0.5, 1.0", "eval_times = 0.5, 1.5");
        assert!(ExperimentConfig::from_flat_str(&late).is_err());

        let stable_without_alpha = SAMPLE.replace("jump_dist = gaussian", "jump_dist = symmetric-stable");
        let err = ExperimentConfig::from_flat_str(&stable_without_alpha);
        assert!(matches!(err, Err(Error::InvalidConfig(ref m)) if m.contains("alpha")));
    }

    #[test]
    fn exponent_overrides_apply() {
        let text = format!("{SAMPLE}\njump_scale_exponent = 0.25\n");
        let cfg = ExperimentConfig::from_flat_str(&text).unwrap();
        assert_eq!(cfg.model.jump_scale_exponent, 0.25);
        assert!((cfg.model.wait_scale_exponent - 1.0 / 0.7).abs() < 1e-15);
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = ExperimentConfig::from_flat_str(SAMPLE).unwrap();
        let json = serde_json::to_string(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }
}
