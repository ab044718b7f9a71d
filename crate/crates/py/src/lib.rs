//! Python bindings: the path type, the stair-filling and subordination
//! transforms, the Skorokhod distance brackets, certificates, walk
//! simulation and the randomized suites.
//!
//! Everything crosses the boundary either as plain numbers and tuples or as
//! JSON strings (for the richer reports), so the Python side needs nothing
//! beyond the standard library.

use ctrw_lab::ctrw::{cpctrw_path, ctrw_path, octrw_path, sample_renewal_pair_with};
use ctrw_lab::lab::{self, ExperimentConfig, WalkKind};
use ctrw_lab::limit_process::{limit_cpctrw, limit_ctrw, sample_limit_pair_with};
use ctrw_lab::path::{CadlagPath, Knot, SegmentMode};
use ctrw_lab::samplers::replicate_rng;
use ctrw_lab::{skorokhod, transform};
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

fn err(e: ctrw_lab::Error) -> PyErr {
    match e {
        ctrw_lab::Error::Io(inner) => PyIOError::new_err(inner.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn mode_name(mode: SegmentMode) -> &'static str {
    match mode {
        SegmentMode::Hold => "hold",
        SegmentMode::Linear => "linear",
    }
}

fn parse_mode(raw: &str) -> PyResult<SegmentMode> {
    match raw {
        "hold" => Ok(SegmentMode::Hold),
        "linear" => Ok(SegmentMode::Linear),
        other => Err(PyValueError::new_err(format!(
            "unknown segment mode {other:?}; expected \"hold\" or \"linear\""
        ))),
    }
}

/// A finite-knot path: right-continuous, with hold or linear segments
/// between strictly increasing knot times.
#[pyclass(frozen, from_py_object, module = "ctrwlab")]
#[derive(Clone)]
struct Path {
    inner: CadlagPath,
}

#[pymethods]
impl Path {
    /// Builds a path from `(time, value, mode)` knots; `mode` is `"hold"`
    /// or `"linear"`.
    #[staticmethod]
    fn from_knots(horizon: f64, knots: Vec<(f64, Vec<f64>, String)>) -> PyResult<Self> {
        let knots = knots
            .into_iter()
            .map(|(t, v, m)| {
                Ok(Knot {
                    time: t,
                    value: v,
                    mode: parse_mode(&m)?,
                })
            })
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Path {
            inner: CadlagPath::from_knots(horizon, knots).map_err(err)?,
        })
    }

    /// Piecewise-constant path through `(time, value)` points.
    #[staticmethod]
    fn step(horizon: f64, points: Vec<(f64, Vec<f64>)>) -> PyResult<Self> {
        Ok(Path {
            inner: CadlagPath::step(horizon, points).map_err(err)?,
        })
    }

    #[staticmethod]
    fn identity(horizon: f64) -> PyResult<Self> {
        Ok(Path {
            inner: CadlagPath::identity(horizon).map_err(err)?,
        })
    }

    #[staticmethod]
    fn constant(horizon: f64, value: Vec<f64>) -> PyResult<Self> {
        Ok(Path {
            inner: CadlagPath::constant(horizon, value).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Path {
            inner: CadlagPath::from_json_str(text).map_err(err)?,
        })
    }

    #[getter]
    fn horizon(&self) -> f64 {
        self.inner.horizon()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, t: f64) -> PyResult<Vec<f64>> {
        self.inner.eval(t).map_err(err)
    }

    fn left_limit(&self, t: f64) -> PyResult<Vec<f64>> {
        self.inner.left_limit(t).map_err(err)
    }

    /// Start of the maximal constant stretch ending at `t` (0 when the
    /// path was never different before `t`).
    fn eta(&self, t: f64) -> PyResult<f64> {
        self.inner.eta(t).map_err(err)
    }

    /// End of the constant stretch through `t`; `inf` when the path never
    /// changes again.
    fn theta(&self, t: f64) -> PyResult<f64> {
        self.inner.theta(t).map_err(err)
    }

    /// Jump list as `(time, left, right, magnitude)` tuples.
    fn jumps(&self) -> Vec<(f64, Vec<f64>, Vec<f64>, f64)> {
        self.inner
            .discontinuities()
            .into_iter()
            .map(|j| (j.time, j.left, j.right, j.magnitude))
            .collect()
    }

    /// Knot list as `(time, value, mode)` tuples.
    fn knots(&self) -> Vec<(f64, Vec<f64>, String)> {
        self.inner
            .knots()
            .map(|k| (k.time, k.value, mode_name(k.mode).to_string()))
            .collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "Path(dim={}, horizon={}, knots={})",
            self.inner.dim(),
            self.inner.horizon(),
            self.inner.knot_times().len()
        )
    }
}

/// Replaces every jump-terminated plateau by the linear ramp through its
/// endpoints.
#[pyfunction]
fn stair_fill(path: &Path) -> Path {
    Path {
        inner: transform::stair_fill(&path.inner),
    }
}

/// Subordinates `space` by the right inverse of the nondecreasing `clock`.
#[pyfunction]
fn phi(space: &Path, clock: &Path) -> PyResult<Path> {
    let clock = transform::MonotonePath::new(clock.inner.clone()).map_err(err)?;
    Ok(Path {
        inner: transform::phi(&space.inner, &clock).map_err(err)?,
    })
}

/// Right-continuous generalized inverse of a nondecreasing path.
#[pyfunction]
fn right_inverse(clock: &Path) -> PyResult<Path> {
    let clock = transform::MonotonePath::new(clock.inner.clone()).map_err(err)?;
    Ok(Path {
        inner: transform::right_inverse(&clock).map_err(err)?.into_path(),
    })
}

#[pyfunction]
fn uniform_distance(a: &Path, b: &Path, t_max: f64) -> PyResult<f64> {
    skorokhod::uniform_distance(&a.inner, &b.inner, t_max).map_err(err)
}

/// `(lower, upper)` bracket of the J1 distance on `[0, t_max]`.
#[pyfunction]
fn j1_distance(a: &Path, b: &Path, t_max: f64, mesh: f64) -> PyResult<(f64, f64)> {
    skorokhod::j1_distance(&a.inner, &b.inner, t_max, mesh).map_err(err)
}

/// `(lower, upper)` bracket of the M1 distance on `[0, t_max]`.
#[pyfunction]
fn m1_distance(a: &Path, b: &Path, t_max: f64, mesh: f64) -> PyResult<(f64, f64)> {
    skorokhod::m1_distance(&a.inner, &b.inner, t_max, mesh).map_err(err)
}

/// Builds an ordered-subset convergence certificate and returns the
/// outcome as a JSON document (`{"Found": ...}` or `{"Failed": ...}`).
#[pyfunction]
fn certificate_json(
    target: &Path,
    members: Vec<Path>,
    t_max: f64,
    epsilon: f64,
    mesh: f64,
) -> PyResult<String> {
    let members: Vec<CadlagPath> = members.into_iter().map(|p| p.inner).collect();
    let outcome = skorokhod::build_m1_certificate(&target.inner, &members, t_max, epsilon, mesh)
        .map_err(err)?;
    serde_json::to_string_pretty(&outcome).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Draws replicate `replicate` of the walk described by a flat
/// `KEY=VALUE` config. `walk` is one of `ctrw`, `octrw`, `cpctrw`,
/// `limit-ctrw`, `limit-cpctrw`; `n` is the scale index (ignored by the
/// limit walks).
#[pyfunction]
fn sample_walk(config_text: &str, walk: &str, n: usize, replicate: u64) -> PyResult<Path> {
    let config = ExperimentConfig::from_flat_str(config_text).map_err(err)?;
    let kind: WalkKind = walk.parse().map_err(err)?;
    let mut rng = replicate_rng(config.seed, replicate);
    let inner = match kind {
        WalkKind::Ctrw | WalkKind::Octrw | WalkKind::Cpctrw => {
            let pair =
                sample_renewal_pair_with(&config.model, n, config.horizon, &mut rng).map_err(err)?;
            match kind {
                WalkKind::Ctrw => ctrw_path(&pair, config.horizon).map_err(err)?,
                WalkKind::Octrw => octrw_path(&pair, config.horizon).map_err(err)?,
                _ => cpctrw_path(&pair, config.horizon).map_err(err)?,
            }
        }
        WalkKind::LimitCtrw | WalkKind::LimitCpctrw => {
            let (a, d) = sample_limit_pair_with(&config.limit, &mut rng).map_err(err)?;
            if kind == WalkKind::LimitCtrw {
                limit_ctrw(&a, &d).map_err(err)?
            } else {
                limit_cpctrw(&a, &d).map_err(err)?
            }
        }
    };
    Ok(Path { inner })
}

/// Exact two-sample Kolmogorov-Smirnov statistic.
#[pyfunction]
fn ks_statistic(a: Vec<f64>, b: Vec<f64>) -> PyResult<f64> {
    lab::ks_statistic(&a, &b).map_err(err)
}

/// Asymptotic two-sample KS critical value at the 1% level.
#[pyfunction]
fn ks_critical_1pct(n1: usize, n2: usize) -> f64 {
    lab::ks_critical_1pct(n1, n2)
}

/// Runs the randomized invariant suites and returns the report as JSON.
#[pyfunction]
fn property_report_json(seed: u64, cases: usize) -> PyResult<String> {
    let report = lab::run_property_suites(seed, cases);
    serde_json::to_string_pretty(&report).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn ctrwlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Path>()?;
    m.add_function(wrap_pyfunction!(stair_fill, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(right_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(uniform_distance, m)?)?;
    m.add_function(wrap_pyfunction!(j1_distance, m)?)?;
    m.add_function(wrap_pyfunction!(m1_distance, m)?)?;
    m.add_function(wrap_pyfunction!(certificate_json, m)?)?;
    m.add_function(wrap_pyfunction!(sample_walk, m)?)?;
    m.add_function(wrap_pyfunction!(ks_statistic, m)?)?;
    m.add_function(wrap_pyfunction!(ks_critical_1pct, m)?)?;
    m.add_function(wrap_pyfunction!(property_report_json, m)?)?;
    Ok(())
}
