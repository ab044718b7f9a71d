//! Grid simulation of limit pairs `(A, D)` and the limit walks built from
//! them: `R = phi(A, D)` and its continuous companion `f(R)`.
//!
//! `A` is the spatial noise process (Brownian or symmetric stable) and `D`
//! the strictly increasing clock (one-sided stable subordinator or unit
//! drift). Stochastic paths are hold-mode grid approximations with exact
//! per-cell increments on the mesh `k * grid_mesh`; the subordinator grid is
//! generated adaptively until `D` strictly exceeds the horizon, mirroring the
//! renewal-pair stop rule, so every plateau of `R` within the horizon is
//! closed by a jump. The drift clock is the exact identity ramp, not a grid
//! staircase, so subordinating by it changes nothing.
//!
//! Increment normalizations (pinned by the sampler transform tests):
//! Brownian cells are `N(0, sqrt(mesh))`, symmetric stable cells are
//! `mesh^(1/alpha) * X_std`, subordinator cells are
//! `(mesh * gamma(1 - beta))^(1/beta) * S_std`. The gamma factor makes the
//! clock's Laplace exponent `t * gamma(1 - beta) * lam^beta`, the law the
//! unit-scale Pareto wait sums converge to.

use crate::path::CadlagPath;
use crate::samplers;
use crate::transform::{phi, stair_fill, MonotonePath};
use crate::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Hard cap on grid cells per realization.
const MAX_CELLS: usize = 10_000_000;

/// Law of the spatial noise process `A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LimitAKind {
    Brownian,
    SymmetricStable { alpha: f64 },
}

/// Law of the clock process `D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LimitDKind {
    OneSidedStable { beta: f64 },
    /// Deterministic unit-slope drift; realized exactly, not on the grid.
    LinearDrift,
}

/// Grid model for the limit pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitModel {
    pub a_kind: LimitAKind,
    pub d_kind: LimitDKind,
    pub grid_mesh: f64,
    pub horizon: f64,
}

impl LimitModel {
    pub fn validate(&self) -> Result<()> {
        match self.a_kind {
            LimitAKind::Brownian => {}
            LimitAKind::SymmetricStable { alpha } => {
                if !(alpha.is_finite() && alpha > 0.0 && alpha <= 2.0) {
                    return Err(Error::InvalidModel(format!(
                        "symmetric-stable alpha must lie in (0, 2], got {alpha}"
                    )));
                }
            }
        }
        if let LimitDKind::OneSidedStable { beta } = self.d_kind {
            if !(beta.is_finite() && beta > 0.0 && beta < 1.0) {
                return Err(Error::InvalidModel(format!(
                    "subordinator beta must lie in (0, 1), got {beta}"
                )));
            }
        }
        if !(self.grid_mesh.is_finite() && self.grid_mesh > 0.0) {
            return Err(Error::InvalidModel(format!(
                "grid_mesh must be positive, got {}",
                self.grid_mesh
            )));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::InvalidModel(format!(
                "horizon must be positive, got {}",
                self.horizon
            )));
        }
        Ok(())
    }

    fn sample_a_increment<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.a_kind {
            LimitAKind::Brownian => samplers::gaussian(rng, self.grid_mesh.sqrt()),
            LimitAKind::SymmetricStable { alpha } => {
                self.grid_mesh.powf(1.0 / alpha) * samplers::symmetric_stable(rng, alpha)
            }
        }
    }
}

/// Samples one realization of `(A, D)`; deterministic given the seed.
///
/// Both grid paths share the mesh times `k * grid_mesh`. Per cell the noise
/// increment is drawn before the clock increment (the draw order is part of
/// the determinism contract).
pub fn sample_limit_pair(model: &LimitModel, seed: u64) -> Result<(CadlagPath, MonotonePath)> {
    let mut rng = samplers::replicate_rng(seed, 0);
    sample_limit_pair_with(model, &mut rng)
}

/// [`sample_limit_pair`] drawing from a caller-owned RNG.
pub fn sample_limit_pair_with<R: Rng + ?Sized>(
    model: &LimitModel,
    rng: &mut R,
) -> Result<(CadlagPath, MonotonePath)> {
    model.validate()?;
    let mesh = model.grid_mesh;
    match model.d_kind {
        LimitDKind::LinearDrift => {
            // Fixed grid covering the horizon; the clock is the exact ramp
            // over the same span.
            let cells = ((model.horizon / mesh).ceil() as usize).max(1);
            let mut a = 0.0;
            let mut a_knots = vec![(0.0, vec![0.0])];
            for k in 1..=cells {
                a += model.sample_a_increment(rng);
                a_knots.push((k as f64 * mesh, vec![a]));
            }
            let end = cells as f64 * mesh;
            let a_path = CadlagPath::step(end, a_knots)?;
            let d_path = MonotonePath::new(CadlagPath::identity(end)?)?;
            Ok((a_path, d_path))
        }
        LimitDKind::OneSidedStable { beta } => {
            let cell_scale = (mesh * samplers::gamma_one_minus(beta)).powf(1.0 / beta);
            let mut a = 0.0;
            let mut d = 0.0;
            let mut a_knots = vec![(0.0, vec![0.0])];
            let mut d_knots = vec![(0.0, vec![0.0])];
            let mut k = 0usize;
            while d <= model.horizon {
                if k == MAX_CELLS {
                    return Err(Error::Domain(format!(
                        "generation overflow: {MAX_CELLS} grid cells without the clock passing horizon {}",
                        model.horizon
                    )));
                }
                k += 1;
                a += model.sample_a_increment(rng);
                d += cell_scale * samplers::positive_stable(rng, beta);
                let time = k as f64 * mesh;
                a_knots.push((time, vec![a]));
                d_knots.push((time, vec![d]));
            }
            let end = k as f64 * mesh;
            let a_path = CadlagPath::step(end, a_knots)?;
            let d_path = MonotonePath::new(CadlagPath::step(end, d_knots)?)?;
            Ok((a_path, d_path))
        }
    }
}

/// Limit walk `R = phi(A, D)`: the noise path watched through the inverse of
/// the clock. Plateaus of `R` are exactly the clock's jump gaps.
///
/// `D` must be strictly increasing across knots (almost sure for the
/// subordinator, exact for the drift).
pub fn limit_ctrw(a: &CadlagPath, d: &MonotonePath) -> Result<CadlagPath> {
    let dp = d.as_path();
    for k in 1..dp.knot_count() {
        if !(dp.knot_value(k)[0] > dp.knot_value(k - 1)[0]) {
            return Err(Error::InvalidModel(
                "clock path must be strictly increasing across knots".into(),
            ));
        }
    }
    phi(a, d)
}

/// Continuous limit walk `f(R)`: stair-filled [`limit_ctrw`]. On every clock
/// gap it ramps linearly from the pre-jump to the post-jump noise value.
pub fn limit_cpctrw(a: &CadlagPath, d: &MonotonePath) -> Result<CadlagPath> {
    Ok(stair_fill(&limit_ctrw(a, d)?))
}
