//! Randomized invariant suites over the structural layers: plateau
//! boundaries, the stair set, inverse composition, and the walk identities.
//!
//! Each suite draws its own corpus from a seed and checks exact structural
//! equalities (the inverse-composition suite alone uses a 1e-12 arithmetic
//! tolerance). The stair-set and walk-identity suites are parameterized over
//! the function under test so the tests can inject broken variants and prove
//! the suites would catch them.

use crate::ctrw::{
    counting_process, cpctrw_path, ctrw_path, sample_renewal_pair_with, CtrwModel, JumpDist,
    WaitDist,
};
use crate::path::{CadlagPath, THETA_UNBOUNDED};
use crate::samplers::replicate_rng;
use crate::transform::{inverse_of_composed, phi, stair_fill, MonotonePath};
use crate::Result;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Outcome of one randomized suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub checks: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Aggregate of all suites for one `(seed, cases)` run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropertyReport {
    pub seed: u64,
    pub cases: usize,
    pub suites: Vec<SuiteResult>,
}

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }
}

struct Recorder {
    name: &'static str,
    cases: usize,
    checks: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl Recorder {
    fn new(name: &'static str) -> Self {
        Recorder {
            name,
            cases: 0,
            checks: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name.to_string(),
            cases: self.cases,
            checks: self.checks,
            failures: self.failures,
            first_failure: self.first_failure,
        }
    }
}

/// Random hold-mode path on [0, 1]: 5 to 50 knots, repeated values with
/// probability 0.3 so plateaus regularly span several knots.
fn random_step_path<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CadlagPath {
    let target = rng.random_range(5..=50usize);
    let mut times = vec![0.0];
    while times.len() < target {
        times.push(rng.random_range(0.01..0.99));
    }
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times.dedup();
    let fresh = |rng: &mut R| -> Vec<f64> {
        (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect()
    };
    let mut value = fresh(rng);
    let mut knots = Vec::with_capacity(times.len());
    for &t in &times {
        if !knots.is_empty() && rng.random::<f64>() >= 0.3 {
            value = fresh(rng);
        }
        knots.push((t, value.clone()));
    }
    CadlagPath::step(1.0, knots).unwrap()
}

/// Random nondecreasing step path started at 0 with strictly positive
/// plateau heights.
fn random_monotone_step<R: Rng + ?Sized>(rng: &mut R) -> MonotonePath {
    let jumps = rng.random_range(3..=20usize);
    let mut times = vec![0.0];
    while times.len() <= jumps {
        times.push(rng.random_range(0.02..0.98));
    }
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times.dedup();
    let mut v = 0.0;
    let mut knots = vec![(0.0, vec![0.0])];
    for &t in times.iter().skip(1) {
        v += rng.random_range(0.05..1.2);
        knots.push((t, vec![v]));
    }
    MonotonePath::new(CadlagPath::step(1.0, knots).unwrap()).unwrap()
}

/// Probe times for one path: every knot, every knot midpoint, 0, the horizon,
/// and a handful of uniform draws.
fn probe_times<R: Rng + ?Sized>(rng: &mut R, x: &CadlagPath, extra: usize) -> Vec<f64> {
    let times = x.knot_times();
    let mut probes = times.to_vec();
    for w in times.windows(2) {
        probes.push(0.5 * (w[0] + w[1]));
    }
    probes.push(x.horizon());
    probes.push(0.5 * (times[times.len() - 1] + x.horizon()));
    for _ in 0..extra {
        probes.push(rng.random_range(0.0..x.horizon()));
    }
    probes
}

/// Plateau-boundary suite: on random step paths, the defining biconditionals
/// of `eta`/`theta` hold exactly at every probe time.
///
/// For a hold-mode path the value is locally constant on each side except at
/// jumps, so: `eta(t) < t` iff `x(t-) = x(t)`, and then `x` is constant on
/// `(eta, t)` with a genuinely different value just before `eta`; likewise
/// `theta(t) > t` iff `t` is not a jump time, and then `x` is constant on
/// `(t, theta)` with a different value at `theta` (or constant to the horizon
/// when `theta` is unbounded).
pub fn suite_plateau_boundaries(seed: u64, cases: usize) -> SuiteResult {
    let mut rng = replicate_rng(seed, 100);
    let mut rec = Recorder::new("plateau-boundaries");
    for case in 0..cases {
        rec.cases += 1;
        let dim = rng.random_range(1..=3);
        let x = random_step_path(&mut rng, dim);
        for t in probe_times(&mut rng, &x, 10) {
            let eta = x.eta(t).unwrap();
            let theta = x.theta(t).unwrap();
            let ev = x.eval(t).unwrap();
            let ll = if t > 0.0 { x.left_limit(t).unwrap() } else { ev.clone() };
            let flat_left = ll == ev;

            rec.check(eta <= t, || format!("case {case}: eta({t}) = {eta} > t"));
            rec.check(theta >= t, || format!("case {case}: theta({t}) = {theta} < t"));
            if t > 0.0 {
                rec.check((eta < t) == flat_left, || {
                    format!("case {case}: eta({t}) = {eta}, left-flatness {flat_left}")
                });
            }
            if eta < t {
                rec.check(x.is_constant_on(eta, t).unwrap(), || {
                    format!("case {case}: not constant on ({eta}, {t})")
                });
                if eta > 0.0 {
                    rec.check(x.left_limit(eta).unwrap() != ev, || {
                        format!("case {case}: eta({t}) = {eta} is not maximal")
                    });
                }
            }
            rec.check((theta > t) == flat_left, || {
                format!("case {case}: theta({t}) = {theta}, left-flatness {flat_left}")
            });
            if theta > t {
                if theta == THETA_UNBOUNDED {
                    if t < x.horizon() {
                        rec.check(x.is_constant_on(t, x.horizon()).unwrap(), || {
                            format!("case {case}: unbounded theta but varying after {t}")
                        });
                    }
                } else {
                    rec.check(x.is_constant_on(t, theta).unwrap(), || {
                        format!("case {case}: not constant on ({t}, {theta})")
                    });
                    rec.check(x.eval(theta).unwrap() != ev, || {
                        format!("case {case}: theta({t}) = {theta} is not minimal")
                    });
                }
            }
        }
    }
    rec.finish()
}

/// Stair-set suite, parameterized over the filling transform under test:
/// `fill(x)(t) != x(t)` exactly on the characterized stair set and nowhere
/// else.
pub fn suite_stair_set_with<F>(seed: u64, cases: usize, fill: F) -> SuiteResult
where
    F: Fn(&CadlagPath) -> CadlagPath,
{
    let mut rng = replicate_rng(seed, 101);
    let mut rec = Recorder::new("stair-set");
    for case in 0..cases {
        rec.cases += 1;
        let dim = rng.random_range(1..=3);
        let x = random_step_path(&mut rng, dim);
        let filled = fill(&x);
        let jump_times: Vec<f64> = x.discontinuities().iter().map(|j| j.time).collect();
        for t in probe_times(&mut rng, &x, 10) {
            let eta = x.eta(t).unwrap();
            let theta = x.theta(t).unwrap();
            let on_stair = eta < t
                && t < theta
                && theta != THETA_UNBOUNDED
                && theta <= x.horizon()
                && x.is_constant_on(eta, theta).unwrap()
                && jump_times.contains(&theta);
            let differs = filled.eval(t).unwrap() != x.eval(t).unwrap();
            rec.check(differs == on_stair, || {
                format!(
                    "case {case}: t = {t}, filled differs = {differs}, stair set = {on_stair}"
                )
            });
        }
    }
    rec.finish()
}

/// [`suite_stair_set_with`] applied to the real stair-filling transform.
pub fn suite_stair_set(seed: u64, cases: usize) -> SuiteResult {
    suite_stair_set_with(seed, cases, stair_fill)
}

/// Inverse-composition suite: composing a nondecreasing step path with its
/// right inverse and inverting again agrees with the self-subordination
/// `phi(y, y)`, at every output knot, on a dense grid, at forced probes
/// inside every jump gap, and at every gap closure. Tolerance 1e-12.
pub fn suite_inverse_composition(seed: u64, cases: usize) -> SuiteResult {
    let mut rng = replicate_rng(seed, 102);
    let mut rec = Recorder::new("inverse-composition");
    let tol = 1e-12;
    for case in 0..cases {
        rec.cases += 1;
        let y = random_monotone_step(&mut rng);
        let lhs = match inverse_of_composed(&y) {
            Ok(p) => p,
            Err(e) => {
                rec.check(false, || format!("case {case}: inverse_of_composed failed: {e}"));
                continue;
            }
        };
        let rhs = match phi(y.as_path(), &y) {
            Ok(p) => p,
            Err(e) => {
                rec.check(false, || format!("case {case}: phi(y, y) failed: {e}"));
                continue;
            }
        };
        let end = y.end_value();
        let mut probes: Vec<f64> = Vec::new();
        probes.extend_from_slice(lhs.as_path().knot_times());
        probes.extend_from_slice(rhs.knot_times());
        let grid = 1000;
        for i in 0..=grid {
            probes.push(end * i as f64 / grid as f64);
        }
        let yp = y.as_path();
        for k in 1..yp.knot_count() {
            let lo = yp.knot_value(k - 1)[0];
            let hi = yp.knot_value(k)[0];
            if hi > lo {
                // Inside the jump gap and exactly at its closure.
                probes.push(lo + 0.37 * (hi - lo));
                probes.push(hi.min(end));
            }
        }
        for t in probes {
            if !(0.0..=end).contains(&t) {
                continue;
            }
            let a = lhs.value_at(t).unwrap();
            let b = rhs.eval(t).unwrap()[0];
            rec.check((a - b).abs() <= tol, || {
                format!("case {case}: at t = {t}: {a} vs {b}")
            });
        }
    }
    rec.finish()
}

/// Walk-identity suite, parameterized over the counting process under test:
/// on random models, the continuous walk equals the stair-filled walk, the
/// walk equals the subordination of its cumulative pair, plateau boundaries
/// are the bracketing renewal instants, and the counting identities hold.
/// All comparisons exact.
pub fn suite_walk_identities_with<F>(seed: u64, cases: usize, count: F) -> SuiteResult
where
    F: Fn(&MonotonePath, usize, f64) -> Result<usize>,
{
    let mut rng = replicate_rng(seed, 103);
    let mut rec = Recorder::new("walk-identities");
    for case in 0..cases {
        rec.cases += 1;
        let model = random_model(&mut rng);
        let n = rng.random_range(1..=25usize);
        let horizon = rng.random_range(0.3..1.5);
        let pair = match sample_renewal_pair_with(&model, n, horizon, &mut rng) {
            Ok(p) => p,
            Err(e) => {
                rec.check(false, || format!("case {case}: sampling failed: {e}"));
                continue;
            }
        };
        let walk = ctrw_path(&pair, horizon).unwrap();
        let continuous = cpctrw_path(&pair, horizon).unwrap();

        // The walk is the subordination of its own cumulative pair.
        let via_phi = phi(pair.s_path(), pair.t_path()).unwrap();
        rec.check(walk.to_json_string() == via_phi.to_json_string(), || {
            format!("case {case}: walk differs from subordinated pair")
        });

        // The continuous walk is the stair-filled walk (jump laws here never
        // produce exactly zero increments).
        let filled = stair_fill(&walk);
        rec.check(continuous.to_json_string() == filled.to_json_string(), || {
            format!("case {case}: continuous walk differs from stair-filled walk")
        });

        // Plateau boundaries bracket each probe by renewal instants.
        for k in 0..pair.renewal_count() {
            let a = pair.renewal_time(k);
            let b = pair.renewal_time(k + 1);
            if a > horizon {
                break;
            }
            let mid = 0.5 * (a + b);
            let n_mid = match count(pair.t_path(), n, mid) {
                Ok(v) => v,
                Err(e) => {
                    rec.check(false, || format!("case {case}: counting failed: {e}"));
                    continue;
                }
            };
            if n_mid + 1 > pair.renewal_count() {
                rec.check(false, || {
                    format!("case {case}: count {n_mid} at {mid} exceeds renewals")
                });
                continue;
            }
            rec.check(
                walk.eta(mid).unwrap() == pair.renewal_time(n_mid),
                || format!("case {case}: eta({mid}) != renewal {n_mid}"),
            );
            rec.check(
                walk.theta(mid).unwrap() == pair.renewal_time(n_mid + 1),
                || format!("case {case}: theta({mid}) != renewal {}", n_mid + 1),
            );
        }

        // Counting identity chain at random probes.
        for _ in 0..20 {
            let t = rng.random_range(0.0..horizon);
            let n_t = match count(pair.t_path(), n, t) {
                Ok(v) => v,
                Err(e) => {
                    rec.check(false, || format!("case {case}: counting failed: {e}"));
                    continue;
                }
            };
            if n_t + 1 > pair.renewal_count() {
                rec.check(false, || {
                    format!("case {case}: count {n_t} at {t} exceeds renewals")
                });
                continue;
            }
            let at_current = count(pair.t_path(), n, pair.renewal_time(n_t)).unwrap_or(usize::MAX);
            let at_next = count(pair.t_path(), n, pair.renewal_time(n_t + 1)).unwrap_or(usize::MAX);
            rec.check(at_current == n_t, || {
                format!("case {case}: count at own renewal instant broke, t = {t}")
            });
            rec.check(at_next == n_t + 1, || {
                format!("case {case}: count at next renewal instant broke, t = {t}")
            });
        }
    }
    rec.finish()
}

/// [`suite_walk_identities_with`] applied to the real counting process.
pub fn suite_walk_identities(seed: u64, cases: usize) -> SuiteResult {
    suite_walk_identities_with(seed, cases, |t_path, n, t| counting_process(t_path, n, t))
}

fn random_model<R: Rng + ?Sized>(rng: &mut R) -> CtrwModel {
    let dim = rng.random_range(1..=3);
    let jump_dist = match rng.random_range(0..4u8) {
        0 => JumpDist::Gaussian,
        1 => JumpDist::SymmetricStable {
            alpha: rng.random_range(0.6..2.0),
        },
        2 => {
            let mag = rng.random_range(0.5..1.5);
            JumpDist::Deterministic {
                value: if rng.random::<bool>() { mag } else { -mag },
            }
        }
        _ => {
            let k = rng.random_range(2..=4usize);
            let values = (0..k)
                .map(|_| {
                    let mag: f64 = rng.random_range(0.5..2.0);
                    if rng.random::<bool>() {
                        mag
                    } else {
                        -mag
                    }
                })
                .collect();
            let weights = (0..k).map(|_| rng.random_range(0.2..1.0)).collect();
            JumpDist::Table { values, weights }
        }
    };
    let wait_dist = match rng.random_range(0..4u8) {
        0 => WaitDist::Exponential,
        1 => WaitDist::Pareto {
            beta: rng.random_range(0.4..1.8),
        },
        2 => WaitDist::OneSidedStable {
            beta: rng.random_range(0.3..0.9),
        },
        _ => WaitDist::Deterministic {
            value: rng.random_range(0.3..1.2),
        },
    };
    CtrwModel::new(dim, jump_dist, wait_dist).unwrap()
}

/// Runs every suite at the same `(seed, cases)`.
pub fn run_property_suites(seed: u64, cases: usize) -> PropertyReport {
    PropertyReport {
        seed,
        cases,
        suites: vec![
            suite_plateau_boundaries(seed, cases),
            suite_stair_set(seed, cases),
            suite_inverse_composition(seed, cases),
            suite_walk_identities(seed, cases),
        ],
    }
}
