//! Algebra of cadlag paths with computable Skorokhod distances and a continuous
//! time random walk (CTRW) scaling-limit laboratory.
//!
//! The crate is organized around a finite-knot representation of cadlag paths
//! ([`path::CadlagPath`]): piecewise hold/linear segments on `[0, horizon]`.
//! On top of it sit
//!
//! * structural transforms ([`transform`]): the stair-filling map that replaces
//!   each plateau-then-jump "stair" by a linear ramp, generalized right
//!   inverses of nondecreasing paths, and the inverse-subordination operator
//!   `phi(x, y)` taking a spatial path and a nondecreasing time path to the
//!   time-changed path,
//! * Skorokhod J1/M1 distances with certified brackets and ordered-subset
//!   convergence certificates ([`skorokhod`]),
//! * renewal-pair simulators for CTRW / overshooting CTRW / continuous-path
//!   CTRW processes and their scaling limits ([`ctrw`], [`limit_process`]),
//! * a small laboratory ([`lab`]) that runs marginal-convergence experiments,
//!   the worked counterexample suite, and randomized invariant suites, all
//!   reproducible from `(config, seed)`.
//!
//! Everything structural (plateau boundaries, jump records, inverses of step
//! paths, step-path compositions) is computed exactly in `f64` arithmetic;
//! distances return `(lower, upper)` brackets that are honest bounds.

pub mod ctrw;
pub mod lab;
pub mod limit_process;
pub mod path;
pub mod samplers;
pub mod skorokhod;
pub mod transform;

/// Crate-wide error type.
///
/// `Domain` covers evaluation outside a path's time domain and ill-posed
/// queries; the `Invalid*` variants cover structurally bad inputs (they are
/// returned, never panicked, including on deserialization).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
