//! Triangular-array CTRW machinery: cumulative jump and waiting-time
//! processes, the renewal counting process, and the walk variants built on
//! them (CTRW, overshooting CTRW, continuous-path CTRW).
//!
//! A [`RenewalPair`] holds the cumulative processes of one realization:
//! `S` is the d-dimensional random walk of scaled jumps and `T` the strictly
//! increasing partial sums of scaled waits, both hold-mode paths with knots at
//! `k/n`. Generation continues until `T` strictly exceeds the requested
//! horizon, so the last renewal always lies beyond it: every plateau of the
//! CTRW within the horizon is closed by a jump and the walk variants need no
//! incomplete-stair convention.
//!
//! Scaling is applied at sample time: with scale index `n`, each raw jump is
//! multiplied by `n^(-jump_scale_exponent)` and each raw wait by
//! `n^(-wait_scale_exponent)`, so gaussian (exponent 1/2) and stable
//! (exponent 1/alpha) regimes share one code path.

use crate::path::{CadlagPath, Knot};
use crate::samplers;
use crate::transform::MonotonePath;
use crate::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Hard cap on renewals per realization; hitting it means the wait scaling is
/// so aggressive that `T` cannot pass the horizon in any reasonable time.
const MAX_RENEWALS: usize = 2_000_000;

/// Jump-increment distribution, applied iid per coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum JumpDist {
    /// Mean zero, unit variance.
    Gaussian,
    /// Characteristic function `exp(-|t|^alpha)`, `alpha` in `(0, 2]`.
    SymmetricStable { alpha: f64 },
    /// Every jump equals `value` in every coordinate.
    Deterministic { value: f64 },
    /// Discrete table sampled proportionally to `weights`; a hook for custom
    /// increment laws, untested against any limit theorem.
    Table { values: Vec<f64>, weights: Vec<f64> },
}

/// Waiting-time distribution; samples are strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WaitDist {
    /// Unit mean.
    Exponential,
    /// Survival `P(J > t) = t^(-beta)` on `[1, inf)`; heavy-tailed for
    /// `beta < 1`, where its partial sums under `n^(-1/beta)` scaling converge
    /// to the one-sided stable law with Laplace exponent
    /// `gamma(1 - beta) * lam^beta`.
    Pareto { beta: f64 },
    /// Laplace transform `exp(-lam^beta)`, `beta` in `(0, 1)`.
    OneSidedStable { beta: f64 },
    /// Every wait equals `value > 0`.
    Deterministic { value: f64 },
}

impl JumpDist {
    /// Canonical scaling exponent: the `a` in `n^(-a)` for which the scaled
    /// partial sums have a nondegenerate limit (CLT default for the table
    /// hook).
    fn canonical_exponent(&self) -> f64 {
        match self {
            JumpDist::Gaussian => 0.5,
            JumpDist::SymmetricStable { alpha } => 1.0 / alpha,
            JumpDist::Deterministic { .. } => 1.0,
            JumpDist::Table { .. } => 0.5,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            JumpDist::Gaussian => Ok(()),
            JumpDist::SymmetricStable { alpha } => {
                if alpha.is_finite() && *alpha > 0.0 && *alpha <= 2.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidModel(format!(
                        "symmetric-stable alpha must lie in (0, 2], got {alpha}"
                    )))
                }
            }
            JumpDist::Deterministic { value } => {
                if value.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidModel("deterministic jump must be finite".into()))
                }
            }
            JumpDist::Table { values, weights } => {
                if values.is_empty() || values.len() != weights.len() {
                    return Err(Error::InvalidModel(
                        "table needs equally many values and weights, at least one".into(),
                    ));
                }
                if !values.iter().all(|v| v.is_finite()) {
                    return Err(Error::InvalidModel("table values must be finite".into()));
                }
                let sum: f64 = weights.iter().sum();
                if weights.iter().any(|w| !w.is_finite() || *w < 0.0) || sum <= 0.0 {
                    return Err(Error::InvalidModel(
                        "table weights must be nonnegative with positive sum".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            JumpDist::Gaussian => samplers::gaussian(rng, 1.0),
            JumpDist::SymmetricStable { alpha } => samplers::symmetric_stable(rng, *alpha),
            JumpDist::Deterministic { value } => *value,
            JumpDist::Table { values, weights } => {
                let total: f64 = weights.iter().sum();
                let mut u = rng.random::<f64>() * total;
                for (v, w) in values.iter().zip(weights) {
                    u -= w;
                    if u < 0.0 {
                        return *v;
                    }
                }
                *values.last().unwrap()
            }
        }
    }
}

impl WaitDist {
    /// Canonical scaling exponent: `1/beta` in the heavy-tail regime, `1`
    /// (law-of-large-numbers drift) when the mean is finite.
    fn canonical_exponent(&self) -> f64 {
        match self {
            WaitDist::Exponential => 1.0,
            WaitDist::Pareto { beta } => {
                if *beta < 1.0 {
                    1.0 / beta
                } else {
                    1.0
                }
            }
            WaitDist::OneSidedStable { beta } => 1.0 / beta,
            WaitDist::Deterministic { .. } => 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            WaitDist::Exponential => Ok(()),
            WaitDist::Pareto { beta } => {
                if beta.is_finite() && *beta > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidModel(format!(
                        "pareto beta must be positive, got {beta}"
                    )))
                }
            }
            WaitDist::OneSidedStable { beta } => {
                if beta.is_finite() && *beta > 0.0 && *beta < 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidModel(format!(
                        "one-sided stable beta must lie in (0, 1), got {beta}"
                    )))
                }
            }
            WaitDist::Deterministic { value } => {
                if value.is_finite() && *value > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidModel(format!(
                        "deterministic wait must be positive, got {value}"
                    )))
                }
            }
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            WaitDist::Exponential => samplers::exponential(rng, 1.0),
            WaitDist::Pareto { beta } => samplers::pareto(rng, *beta),
            WaitDist::OneSidedStable { beta } => samplers::positive_stable(rng, *beta),
            WaitDist::Deterministic { value } => *value,
        }
    }
}

/// Jump/wait model for the triangular array of walks indexed by scale `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CtrwModel {
    pub dim: usize,
    pub jump_dist: JumpDist,
    pub wait_dist: WaitDist,
    /// Jumps are scaled by `n^(-jump_scale_exponent)`.
    pub jump_scale_exponent: f64,
    /// Waits are scaled by `n^(-wait_scale_exponent)`.
    pub wait_scale_exponent: f64,
}

impl CtrwModel {
    /// Model with the canonical scaling exponents for the given laws.
    pub fn new(dim: usize, jump_dist: JumpDist, wait_dist: WaitDist) -> Result<Self> {
        let model = CtrwModel {
            dim,
            jump_scale_exponent: jump_dist.canonical_exponent(),
            wait_scale_exponent: wait_dist.canonical_exponent(),
            jump_dist,
            wait_dist,
        };
        model.validate()?;
        Ok(model)
    }

    /// Same model with explicit scaling exponents.
    pub fn with_exponents(mut self, jump: f64, wait: f64) -> Result<Self> {
        self.jump_scale_exponent = jump;
        self.wait_scale_exponent = wait;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidModel("dim must be at least 1".into()));
        }
        self.jump_dist.validate()?;
        self.wait_dist.validate()?;
        for (name, e) in [
            ("jump_scale_exponent", self.jump_scale_exponent),
            ("wait_scale_exponent", self.wait_scale_exponent),
        ] {
            if !e.is_finite() || e <= 0.0 {
                return Err(Error::InvalidModel(format!(
                    "{name} must be positive and finite, got {e}"
                )));
            }
        }
        Ok(())
    }

    fn sample_jump<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.dim).map(|_| self.jump_dist.sample(rng)).collect()
    }

    fn sample_wait<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.wait_dist.sample(rng)
    }
}

/// One realization of the cumulative processes `(S, T)` at scale `n`.
///
/// Both paths are hold-mode with knots at `k/n`, `k = 0..=renewal_count`;
/// `S(k/n)` is the walk position after `k` jumps and `T(k/n)` the instant of
/// the k-th renewal. `T` is strictly increasing across knots (waits are
/// strictly positive) and its last value exceeds the horizon the pair was
/// generated for.
#[derive(Debug, Clone)]
pub struct RenewalPair {
    s_path: CadlagPath,
    t_path: MonotonePath,
    n: usize,
    renewal_count: usize,
}

impl RenewalPair {
    /// Builds the pair from explicit increment lists (already scaled).
    ///
    /// Every wait must be strictly positive and every jump must have one
    /// value per coordinate.
    pub fn from_increments(n: usize, jumps: &[Vec<f64>], waits: &[f64]) -> Result<RenewalPair> {
        if n == 0 {
            return Err(Error::InvalidModel("scale index n must be positive".into()));
        }
        if jumps.is_empty() || jumps.len() != waits.len() {
            return Err(Error::InvalidModel(
                "need equally many jumps and waits, at least one".into(),
            ));
        }
        let dim = jumps[0].len();
        if dim == 0 || jumps.iter().any(|y| y.len() != dim) {
            return Err(Error::InvalidModel("jumps must share one positive dimension".into()));
        }
        if waits.iter().any(|j| !(*j > 0.0)) {
            return Err(Error::InvalidModel("waits must be strictly positive".into()));
        }
        let nf = n as f64;
        let count = jumps.len();
        let mut s = vec![0.0; dim];
        let mut t = 0.0;
        let mut s_knots = Vec::with_capacity(count + 1);
        let mut t_knots = Vec::with_capacity(count + 1);
        s_knots.push((0.0, s.clone()));
        t_knots.push((0.0, vec![0.0]));
        for (k, (y, j)) in jumps.iter().zip(waits).enumerate() {
            for (si, yi) in s.iter_mut().zip(y) {
                *si += yi;
            }
            t += j;
            let time = (k + 1) as f64 / nf;
            s_knots.push((time, s.clone()));
            t_knots.push((time, vec![t]));
        }
        let end = count as f64 / nf;
        let s_path = CadlagPath::step(end, s_knots)?;
        let t_path = MonotonePath::new(CadlagPath::step(end, t_knots)?)?;
        Ok(RenewalPair {
            s_path,
            t_path,
            n,
            renewal_count: count,
        })
    }

    /// Cumulative jump process `S`, hold-mode, knots at `k/n`.
    pub fn s_path(&self) -> &CadlagPath {
        &self.s_path
    }

    /// Cumulative wait process `T`, hold-mode, strictly increasing knots.
    pub fn t_path(&self) -> &MonotonePath {
        &self.t_path
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of (jump, wait) pairs generated.
    pub fn renewal_count(&self) -> usize {
        self.renewal_count
    }

    /// Instant of the k-th renewal, `T(k/n)`; `renewal_time(0) = 0`.
    pub fn renewal_time(&self, k: usize) -> f64 {
        self.t_path.as_path().knot_value(k)[0]
    }

    /// Walk position after `k` jumps, `S(k/n)`.
    pub fn jump_position(&self, k: usize) -> &[f64] {
        self.s_path.knot_value(k)
    }

    /// Instant of the last generated renewal (beyond the generation horizon).
    pub fn last_renewal_time(&self) -> f64 {
        self.renewal_time(self.renewal_count)
    }
}

/// Samples the cumulative pair `(S, T)` at scale `n`, generating renewals
/// until `T` strictly exceeds `horizon`; deterministic given the seed.
///
/// Replicate ensembles should use [`sample_renewal_pair_with`] with
/// per-replicate RNG streams from [`samplers::replicate_rng`].
pub fn sample_renewal_pair(
    model: &CtrwModel,
    n: usize,
    horizon: f64,
    seed: u64,
) -> Result<RenewalPair> {
    let mut rng = samplers::replicate_rng(seed, 0);
    sample_renewal_pair_with(model, n, horizon, &mut rng)
}

/// [`sample_renewal_pair`] drawing from a caller-owned RNG.
pub fn sample_renewal_pair_with<R: Rng + ?Sized>(
    model: &CtrwModel,
    n: usize,
    horizon: f64,
    rng: &mut R,
) -> Result<RenewalPair> {
    model.validate()?;
    if n == 0 {
        return Err(Error::InvalidModel("scale index n must be positive".into()));
    }
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::Domain(format!("horizon must be positive, got {horizon}")));
    }
    let nf = n as f64;
    let jump_scale = nf.powf(-model.jump_scale_exponent);
    let wait_scale = nf.powf(-model.wait_scale_exponent);
    let mut jumps = Vec::new();
    let mut waits = Vec::new();
    let mut t = 0.0;
    while t <= horizon {
        if jumps.len() == MAX_RENEWALS {
            return Err(Error::Domain(format!(
                "generation overflow: {MAX_RENEWALS} renewals without passing horizon {horizon}"
            )));
        }
        let y: Vec<f64> = model.sample_jump(rng).iter().map(|v| jump_scale * v).collect();
        let j = wait_scale * model.sample_wait(rng);
        t += j;
        jumps.push(y);
        waits.push(j);
    }
    RenewalPair::from_increments(n, &jumps, &waits)
}

/// Renewal counting process `N(t) = max{k >= 0 : T(k/n) <= t}`.
///
/// `t_path` must carry its knots on the `k/n` grid (as produced for scale
/// index `n`); `t` beyond the last generated renewal is a domain error
/// because the true count there is unknown.
pub fn counting_process(t_path: &MonotonePath, n: usize, t: f64) -> Result<usize> {
    let path = t_path.as_path();
    let count = path.knot_count();
    let last_time = path.knot_times()[count - 1];
    if n == 0 || last_time != (count - 1) as f64 / n as f64 {
        return Err(Error::InvalidModel(
            "counting process needs knots on the k/n grid".into(),
        ));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time {t} is negative")));
    }
    let last = path.knot_value(count - 1)[0];
    if t > last {
        return Err(Error::Domain(format!(
            "time {t} is beyond the last generated renewal {last}"
        )));
    }
    // Invariant: knot value at lo is <= t (value 0 at index 0 seeds it),
    // every index from hi on has value > t.
    let mut lo = 0usize;
    let mut hi = count;
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if path.knot_value(mid)[0] <= t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// CTRW path: the walk held at its latest renewal position,
/// `X(t) = S(N(t)/n)`.
///
/// Hold-mode knots at the renewal instants `(T(k/n), S(k/n))`; the returned
/// path extends to the last generated renewal (at or beyond `horizon`), so
/// every plateau inside `horizon` is closed by its jump.
pub fn ctrw_path(pair: &RenewalPair, horizon: f64) -> Result<CadlagPath> {
    let end = pair.last_renewal_time();
    if !(horizon <= end) {
        return Err(Error::Domain(format!(
            "renewal pair covers [0, {end}], cannot build walk to horizon {horizon}"
        )));
    }
    let knots = (0..=pair.renewal_count)
        .map(|k| (pair.renewal_time(k), pair.jump_position(k).to_vec()))
        .collect();
    CadlagPath::step(end, knots)
}

/// Overshooting CTRW path: the walk already at its next renewal position,
/// `X'(t) = S((N(t) + 1)/n)`.
///
/// Requires a renewal strictly beyond `horizon` (the overshoot target), so
/// `horizon` must be strictly less than the last generated renewal instant.
pub fn octrw_path(pair: &RenewalPair, horizon: f64) -> Result<CadlagPath> {
    if !(horizon > 0.0) {
        return Err(Error::Domain(format!("horizon must be positive, got {horizon}")));
    }
    if !(horizon < pair.last_renewal_time()) {
        return Err(Error::Domain(format!(
            "no overshoot renewal beyond horizon {horizon}: last renewal is at {}",
            pair.last_renewal_time()
        )));
    }
    let mut knots = Vec::new();
    for k in 0..pair.renewal_count {
        if pair.renewal_time(k) > horizon {
            break;
        }
        knots.push((pair.renewal_time(k), pair.jump_position(k + 1).to_vec()));
    }
    CadlagPath::step(horizon, knots)
}

/// Continuous-path CTRW: linear interpolation between successive renewal
/// points `(T(k/n), S(k/n))`.
///
/// Continuous by construction. Coincides with `stair_fill` of [`ctrw_path`]
/// exactly whenever every jump increment is nonzero (a zero jump merges two
/// plateaus into one stair, which stair-filling ramps in one piece while the
/// interpolation keeps the intermediate renewal vertex).
pub fn cpctrw_path(pair: &RenewalPair, horizon: f64) -> Result<CadlagPath> {
    let end = pair.last_renewal_time();
    if !(horizon <= end) {
        return Err(Error::Domain(format!(
            "renewal pair covers [0, {end}], cannot build walk to horizon {horizon}"
        )));
    }
    let last = pair.renewal_count;
    let knots = (0..=last)
        .map(|k| {
            let v = pair.jump_position(k).to_vec();
            if k < last {
                Knot::linear(pair.renewal_time(k), v)
            } else {
                Knot::hold(pair.renewal_time(k), v)
            }
        })
        .collect();
    CadlagPath::from_knots(end, knots)
}
