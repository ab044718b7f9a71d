//! The worked counterexample family and the hypothesis-driven sequences.
//!
//! The counterexample is the classic one for the stair-filling transform:
//! a ramp that pauses at height 1 on `[1, 2)` and jumps back onto the
//! diagonal at `t = 2`. Filling the limit path yields exactly the identity,
//! yet filling the approximating members (whose pause splits into two
//! shorter plateaus at heights 1 and `1 + 1/n`) yields paths that converge
//! to the *unfilled* limit, staying a fixed distance away from the
//! identity. The runners below tabulate both effects with certified
//! distance brackets and matching certificates.
//!
//! The second half builds three step-path sequences that do satisfy the
//! plateau-tracking hypotheses (boundary times and jump sizes converge
//! along the stairs), so their filled paths converge to the filled limit.

use crate::path::{CadlagPath, Knot};
use crate::skorokhod::{build_m1_certificate, m1_distance, uniform_distance, CertificateOutcome};
use crate::transform::stair_fill;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

const EXAMPLE_HORIZON: f64 = 3.0;
const EXAMPLE_T_MAX: f64 = 2.5;
const EXAMPLE_MESH: f64 = 1.0 / 256.0;

const TRACKING_HORIZON: f64 = 4.0;
const TRACKING_T_MAX: f64 = 3.5;
const TRACKING_MESH: f64 = 1.0 / 128.0;

/// Limit path of the counterexample: the diagonal, paused at height 1 on
/// `[1, 2)`, rejoining with a jump at `t = 2`.
pub fn example_limit_path(horizon: f64) -> Result<CadlagPath> {
    if !(horizon > 2.0) {
        return Err(Error::Domain("the example needs horizon > 2".into()));
    }
    CadlagPath::from_knots(
        horizon,
        vec![
            Knot::linear(0.0, vec![0.0]),
            Knot::hold(1.0, vec![1.0]),
            Knot::linear(2.0, vec![2.0]),
            Knot::hold(horizon, vec![horizon]),
        ],
    )
}

/// Member `n` of the counterexample sequence: the pause splits at
/// `2 - 1/n`, stepping up to `1 + 1/n` before the jump at `t = 2`.
///
/// Defined for `n >= 2`. The first member's pause at height 1 is empty, so
/// it would jump at `t = 1` directly off the incoming ramp; linear segments
/// are continuous at their right knot, so that shape has no representation
/// here.
pub fn example_member_path(n: usize, horizon: f64) -> Result<CadlagPath> {
    if n < 2 {
        return Err(Error::Domain(
            "member index must be at least 2; the first member jumps off a ramp".into(),
        ));
    }
    if !(horizon > 2.0) {
        return Err(Error::Domain("the example needs horizon > 2".into()));
    }
    let inv = 1.0 / n as f64;
    CadlagPath::from_knots(
        horizon,
        vec![
            Knot::linear(0.0, vec![0.0]),
            Knot::hold(1.0, vec![1.0]),
            Knot::hold(2.0 - inv, vec![1.0 + inv]),
            Knot::linear(2.0, vec![2.0]),
            Knot::hold(horizon, vec![horizon]),
        ],
    )
}

/// One row of the counterexample table. Distance brackets are
/// `(lower, upper)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Example1Row {
    pub n: usize,
    /// Raw member against the limit path.
    pub m1_member_vs_limit: (f64, f64),
    /// Filled member against the (unfilled) limit path.
    pub m1_filled_vs_limit: (f64, f64),
    /// Filled member against the identity, i.e. against the filled limit.
    pub m1_filled_vs_identity: (f64, f64),
    /// Uniform distance of the raw member from the limit path.
    pub uniform_member_vs_limit: f64,
}

/// Outcome of one certificate construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateRow {
    pub epsilon: f64,
    /// `"limit"`: raw members against the limit path. `"identity"`: filled
    /// members against the identity.
    pub target: String,
    pub found: bool,
    /// 1-based index the certificate holds from, when found.
    pub n1: Option<usize>,
    /// Worst bound reached by the last member when the construction failed.
    pub final_gap: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Example1Report {
    pub crate_version: String,
    pub horizon: f64,
    pub t_max: f64,
    pub mesh: f64,
    pub rows: Vec<Example1Row>,
    pub certificates: Vec<CertificateRow>,
}

impl Example1Report {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "n,m1_member_vs_limit_lower,m1_member_vs_limit_upper,\
m1_filled_vs_limit_lower,m1_filled_vs_limit_upper,\
m1_filled_vs_identity_lower,m1_filled_vs_identity_upper,uniform_member_vs_limit"
        )?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                r.n,
                r.m1_member_vs_limit.0,
                r.m1_member_vs_limit.1,
                r.m1_filled_vs_limit.0,
                r.m1_filled_vs_limit.1,
                r.m1_filled_vs_identity.0,
                r.m1_filled_vs_identity.1,
                r.uniform_member_vs_limit
            )?;
        }
        Ok(())
    }

    pub fn write_certificates_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "epsilon,target,found,n1,final_gap")?;
        for c in &self.certificates {
            writeln!(
                w,
                "{},{},{},{},{}",
                c.epsilon,
                c.target,
                c.found,
                c.n1.map_or(String::new(), |v| v.to_string()),
                c.final_gap.map_or(String::new(), |v| v.to_string()),
            )?;
        }
        Ok(())
    }

    /// The behaviour the example exists to demonstrate: filled members
    /// approach the unfilled limit at rate `2/n` but stay at least `1/4`
    /// away from the identity (from `n = 4` on), and certificates against
    /// the identity must fail whenever `epsilon < 1/4`.
    pub fn meets_expectations(&self) -> bool {
        let slack = 1e-9;
        self.rows.iter().all(|r| {
            r.m1_filled_vs_limit.1 <= 2.0 / r.n as f64 + slack
                && (r.n < 4 || r.m1_filled_vs_identity.0 >= 0.25 - slack)
        }) && self.certificates.iter().all(|c| match c.target.as_str() {
            "limit" => c.found,
            _ => !(c.epsilon < 0.25 && c.found),
        })
    }
}

fn certificate_row(
    epsilon: f64,
    target: &str,
    outcome: &CertificateOutcome,
    first_member: usize,
) -> CertificateRow {
    match outcome {
        CertificateOutcome::Found(cert) => CertificateRow {
            epsilon,
            target: target.to_string(),
            found: true,
            n1: Some(first_member + cert.n1 - 1),
            final_gap: None,
        },
        CertificateOutcome::Failed { bounds, .. } => CertificateRow {
            epsilon,
            target: target.to_string(),
            found: false,
            n1: None,
            final_gap: bounds.last().map(|b| b.spread.max(b.offset)),
        },
    }
}

/// First member index of the counterexample sequence.
pub const EXAMPLE_FIRST_MEMBER: usize = 2;

/// Tabulates the counterexample: distance brackets for members
/// `2..=n_max` and certificate outcomes at each requested resolution,
/// both against the limit path (raw members) and against the identity
/// (filled members).
pub fn run_example1(eps_list: &[f64], n_max: usize) -> Result<Example1Report> {
    if n_max < EXAMPLE_FIRST_MEMBER {
        return Err(Error::Domain(format!(
            "n_max must be at least {EXAMPLE_FIRST_MEMBER}"
        )));
    }
    if eps_list.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::Domain("resolutions must be positive".into()));
    }
    let x = example_limit_path(EXAMPLE_HORIZON)?;
    let identity = CadlagPath::identity(EXAMPLE_HORIZON)?;
    let members: Vec<CadlagPath> = (EXAMPLE_FIRST_MEMBER..=n_max)
        .map(|n| example_member_path(n, EXAMPLE_HORIZON))
        .collect::<Result<_>>()?;
    let filled: Vec<CadlagPath> = members.iter().map(stair_fill).collect();

    let mut rows = Vec::with_capacity(members.len());
    for (i, n) in (EXAMPLE_FIRST_MEMBER..=n_max).enumerate() {
        rows.push(Example1Row {
            n,
            m1_member_vs_limit: m1_distance(&members[i], &x, EXAMPLE_T_MAX, EXAMPLE_MESH)?,
            m1_filled_vs_limit: m1_distance(&filled[i], &x, EXAMPLE_T_MAX, EXAMPLE_MESH)?,
            m1_filled_vs_identity: m1_distance(&filled[i], &identity, EXAMPLE_T_MAX, EXAMPLE_MESH)?,
            uniform_member_vs_limit: uniform_distance(&members[i], &x, EXAMPLE_T_MAX)?,
        });
    }

    let mut certificates = Vec::with_capacity(2 * eps_list.len());
    for &eps in eps_list {
        let against_limit = build_m1_certificate(&x, &members, EXAMPLE_T_MAX, eps, EXAMPLE_MESH)?;
        certificates.push(certificate_row(eps, "limit", &against_limit, EXAMPLE_FIRST_MEMBER));
        let against_identity =
            build_m1_certificate(&identity, &filled, EXAMPLE_T_MAX, eps, EXAMPLE_MESH)?;
        certificates.push(certificate_row(
            eps,
            "identity",
            &against_identity,
            EXAMPLE_FIRST_MEMBER,
        ));
    }

    Ok(Example1Report {
        crate_version: env!("CARGO_PKG_VERSION").to_string(),
        horizon: EXAMPLE_HORIZON,
        t_max: EXAMPLE_T_MAX,
        mesh: EXAMPLE_MESH,
        rows,
        certificates,
    })
}

/// The three ways a step sequence can track its limit's stairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceFamily {
    /// Jump times shifted by `1/n`, values exact.
    TimeShift,
    /// Jump times exact, values perturbed by `O(1/n)`.
    Magnitude,
    /// Both perturbed at once.
    Mixed,
}

impl std::fmt::Display for SequenceFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SequenceFamily::TimeShift => "time-shift",
            SequenceFamily::Magnitude => "magnitude",
            SequenceFamily::Mixed => "mixed",
        };
        f.write_str(s)
    }
}

/// Base step path of the tracking sequences: 0, then 1 from `t = 1`, then 3
/// from `t = 2`, on `[0, 4]`.
pub fn tracking_base_path() -> CadlagPath {
    CadlagPath::scalar_step(TRACKING_HORIZON, &[(0.0, 0.0), (1.0, 1.0), (2.0, 3.0)])
        .expect("base path is valid")
}

/// Member `n` of one tracking family.
pub fn tracking_member_path(family: SequenceFamily, n: usize) -> Result<CadlagPath> {
    if n == 0 {
        return Err(Error::Domain("member index must be positive".into()));
    }
    let inv = 1.0 / n as f64;
    let pts = match family {
        SequenceFamily::TimeShift => {
            [(0.0, 0.0), (1.0 + inv, 1.0), (2.0 + inv, 3.0)]
        }
        SequenceFamily::Magnitude => {
            [(0.0, 0.0), (1.0, 1.0 + inv), (2.0, 3.0 - 2.0 * inv)]
        }
        SequenceFamily::Mixed => {
            [(0.0, 0.0), (1.0 - 0.5 * inv, 1.0 - inv), (2.0 + inv, 3.0 + 2.0 * inv)]
        }
    };
    CadlagPath::scalar_step(TRACKING_HORIZON, &pts)
}

/// One member's distance bracket plus how well it tracks the limit stairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheoremRow {
    pub n: usize,
    /// `m1` bracket between the filled member and the filled limit.
    pub m1_filled: (f64, f64),
    /// Worst error in the plateau start times (hypothesis on the left
    /// boundaries).
    pub stair_start_err: f64,
    /// Worst error in the terminating jump times.
    pub stair_end_err: f64,
    /// Worst error in the terminating jump sizes.
    pub jump_size_err: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyReport {
    pub family: SequenceFamily,
    pub rows: Vec<TheoremRow>,
    /// Upper bounds never increase along the ladder.
    pub upper_nonincreasing: bool,
    pub final_upper: f64,
    /// All three stair-tracking errors shrink along the ladder.
    pub hypotheses_converge: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrackingReport {
    pub crate_version: String,
    pub t_max: f64,
    pub mesh: f64,
    pub n_values: Vec<usize>,
    pub families: Vec<FamilyReport>,
}

impl TrackingReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "family,n,m1_filled_lower,m1_filled_upper,stair_start_err,stair_end_err,jump_size_err"
        )?;
        for fam in &self.families {
            for r in &fam.rows {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{}",
                    fam.family,
                    r.n,
                    r.m1_filled.0,
                    r.m1_filled.1,
                    r.stair_start_err,
                    r.stair_end_err,
                    r.jump_size_err
                )?;
            }
        }
        Ok(())
    }

    /// Whether every family's filled distance trends down and ends below
    /// `final_upper_threshold`, with the stair-tracking hypotheses visibly
    /// converging.
    pub fn meets_expectations(&self, final_upper_threshold: f64) -> bool {
        !self.families.is_empty()
            && self.families.iter().all(|f| {
                f.upper_nonincreasing
                    && f.final_upper < final_upper_threshold
                    && f.hypotheses_converge
            })
    }
}

/// `(start, end, size)` of every stair, probed from inside each plateau.
///
/// Valid for step paths whose jumps each terminate a plateau, which is true
/// of every path this module builds.
fn stair_marks(x: &CadlagPath) -> Result<Vec<(f64, f64, f64)>> {
    let jumps = x.discontinuities();
    let mut marks = Vec::with_capacity(jumps.len());
    let mut prev = 0.0;
    for j in &jumps {
        let t = 0.5 * (prev + j.time);
        marks.push((x.eta(t)?, x.theta(t)?, j.magnitude));
        prev = j.time;
    }
    Ok(marks)
}

/// Runs the three tracking families over the given ladder of member
/// indices (ascending), measuring filled-path convergence and the stair
/// hypotheses.
pub fn run_tracking_sequences(n_values: &[usize]) -> Result<TrackingReport> {
    if n_values.is_empty() || n_values.windows(2).any(|w| w[1] <= w[0]) || n_values[0] == 0 {
        return Err(Error::Domain(
            "member ladder must be strictly ascending positive indices".into(),
        ));
    }
    let x = tracking_base_path();
    let filled_limit = stair_fill(&x);
    let limit_marks = stair_marks(&x)?;

    let slack = 1e-12;
    let mut families = Vec::with_capacity(3);
    for family in [SequenceFamily::TimeShift, SequenceFamily::Magnitude, SequenceFamily::Mixed] {
        let mut rows = Vec::with_capacity(n_values.len());
        for &n in n_values {
            let member = tracking_member_path(family, n)?;
            let filled = stair_fill(&member);
            let member_marks = stair_marks(&member)?;
            if member_marks.len() != limit_marks.len() {
                return Err(Error::Domain("stair count changed along the sequence".into()));
            }
            let mut start_err: f64 = 0.0;
            let mut end_err: f64 = 0.0;
            let mut size_err: f64 = 0.0;
            for (m, l) in member_marks.iter().zip(&limit_marks) {
                start_err = start_err.max((m.0 - l.0).abs());
                end_err = end_err.max((m.1 - l.1).abs());
                size_err = size_err.max((m.2 - l.2).abs());
            }
            rows.push(TheoremRow {
                n,
                m1_filled: m1_distance(&filled, &filled_limit, TRACKING_T_MAX, TRACKING_MESH)?,
                stair_start_err: start_err,
                stair_end_err: end_err,
                jump_size_err: size_err,
            });
        }
        let upper_nonincreasing = rows
            .windows(2)
            .all(|w| w[1].m1_filled.1 <= w[0].m1_filled.1 + slack);
        let hypotheses_converge = rows.windows(2).all(|w| {
            w[1].stair_start_err <= w[0].stair_start_err + slack
                && w[1].stair_end_err <= w[0].stair_end_err + slack
                && w[1].jump_size_err <= w[0].jump_size_err + slack
        });
        families.push(FamilyReport {
            family,
            final_upper: rows.last().map_or(f64::NAN, |r| r.m1_filled.1),
            upper_nonincreasing,
            hypotheses_converge,
            rows,
        });
    }

    Ok(TrackingReport {
        crate_version: env!("CARGO_PKG_VERSION").to_string(),
        t_max: TRACKING_T_MAX,
        mesh: TRACKING_MESH,
        n_values: n_values.to_vec(),
        families,
    })
}
