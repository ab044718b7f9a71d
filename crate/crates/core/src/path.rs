//! Finite-knot cadlag paths.
//!
//! A path is a right-continuous function `[0, horizon] -> R^dim` stored as
//! strictly increasing knot times with one value per knot and a segment mode
//! between consecutive knots. A `Hold` segment keeps the left knot's value on
//! `[t_i, t_{i+1})`; a `Linear` segment interpolates toward the next knot's
//! value, so it is continuous at its right end. The stretch from the last knot
//! to the horizon always holds the last value. Consequently every
//! discontinuity sits at a knot whose incoming segment is `Hold` with a
//! different value, and is preceded by a plateau of positive length.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// How a segment between two consecutive knots evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentMode {
    /// Constant at the left knot's value on `[t_i, t_{i+1})`.
    Hold,
    /// Linear from the left knot's value to the right knot's value.
    Linear,
}

/// One knot of a path: time, value, and the mode of the outgoing segment.
/// The last knot's mode is ignored (the trailing stretch always holds).
#[derive(Debug, Clone, PartialEq)]
pub struct Knot {
    pub time: f64,
    pub value: Vec<f64>,
    pub mode: SegmentMode,
}

impl Knot {
    pub fn hold(time: f64, value: Vec<f64>) -> Self {
        Knot { time, value, mode: SegmentMode::Hold }
    }

    pub fn linear(time: f64, value: Vec<f64>) -> Self {
        Knot { time, value, mode: SegmentMode::Linear }
    }
}

/// A jump of a path: time, both one-sided values, and the sup-norm magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct Jump {
    pub time: f64,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub magnitude: f64,
}

/// Sentinel returned by [`CadlagPath::theta`] when the path never leaves the
/// plateau value within the horizon.
pub const THETA_UNBOUNDED: f64 = f64::INFINITY;

/// A cadlag path on `[0, horizon]` with values in `R^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct CadlagPath {
    dim: usize,
    horizon: f64,
    times: Vec<f64>,
    /// Knot values, flattened knot-major: `values[i*dim..(i+1)*dim]`.
    values: Vec<f64>,
    /// One mode per segment between consecutive knots (`times.len() - 1`).
    modes: Vec<SegmentMode>,
}

pub fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

impl CadlagPath {
    /// Builds a path from knots, validating every structural invariant.
    pub fn from_knots(horizon: f64, knots: Vec<Knot>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidPath("need at least one knot".into()));
        }
        let dim = knots[0].value.len();
        if dim == 0 {
            return Err(Error::InvalidPath("value dimension must be >= 1".into()));
        }
        if knots[0].time != 0.0 {
            return Err(Error::InvalidPath(format!(
                "first knot must sit at time 0, got {}",
                knots[0].time
            )));
        }
        if !horizon.is_finite() || horizon < knots[knots.len() - 1].time {
            return Err(Error::InvalidPath(format!(
                "horizon {horizon} must be finite and >= the last knot time"
            )));
        }
        let mut times = Vec::with_capacity(knots.len());
        let mut values = Vec::with_capacity(knots.len() * dim);
        let mut modes = Vec::with_capacity(knots.len().saturating_sub(1));
        for (i, k) in knots.iter().enumerate() {
            if !k.time.is_finite() || k.value.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidPath(format!("non-finite data at knot {i}")));
            }
            if k.value.len() != dim {
                return Err(Error::InvalidPath(format!(
                    "knot {i} has dimension {}, expected {dim}",
                    k.value.len()
                )));
            }
            if i > 0 {
                if k.time <= times[i - 1] {
                    return Err(Error::InvalidPath(format!(
                        "knot times must be strictly increasing ({} then {})",
                        times[i - 1],
                        k.time
                    )));
                }
                modes.push(knots[i - 1].mode);
            }
            times.push(k.time);
            values.extend_from_slice(&k.value);
        }
        Ok(CadlagPath { dim, horizon, times, values, modes })
    }

    /// Step path (all segments hold).
    pub fn step(horizon: f64, knots: Vec<(f64, Vec<f64>)>) -> Result<Self> {
        Self::from_knots(horizon, knots.into_iter().map(|(t, v)| Knot::hold(t, v)).collect())
    }

    /// One-dimensional step path.
    pub fn scalar_step(horizon: f64, pts: &[(f64, f64)]) -> Result<Self> {
        Self::step(horizon, pts.iter().map(|&(t, v)| (t, vec![v])).collect())
    }

    /// One-dimensional continuous polyline through the given points.
    pub fn scalar_linear(horizon: f64, pts: &[(f64, f64)]) -> Result<Self> {
        Self::from_knots(
            horizon,
            pts.iter().map(|&(t, v)| Knot::linear(t, vec![v])).collect(),
        )
    }

    /// The identity path `e(t) = t` on `[0, horizon]`.
    pub fn identity(horizon: f64) -> Result<Self> {
        if !(horizon > 0.0) {
            return Err(Error::InvalidPath("identity path needs horizon > 0".into()));
        }
        Self::scalar_linear(horizon, &[(0.0, 0.0), (horizon, horizon)])
    }

    /// Constant path.
    pub fn constant(horizon: f64, value: Vec<f64>) -> Result<Self> {
        Self::from_knots(horizon, vec![Knot::hold(0.0, value)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn knot_count(&self) -> usize {
        self.times.len()
    }

    pub fn knot_times(&self) -> &[f64] {
        &self.times
    }

    pub fn knot_value(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    /// Mode of the segment leaving knot `i`; the trailing stretch holds.
    pub fn segment_mode(&self, i: usize) -> SegmentMode {
        self.modes.get(i).copied().unwrap_or(SegmentMode::Hold)
    }

    pub fn knots(&self) -> impl Iterator<Item = Knot> + '_ {
        (0..self.times.len()).map(|i| Knot {
            time: self.times[i],
            value: self.knot_value(i).to_vec(),
            mode: self.segment_mode(i),
        })
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if !t.is_finite() || t < 0.0 || t > self.horizon {
            return Err(Error::Domain(format!(
                "time {t} outside [0, {}]",
                self.horizon
            )));
        }
        Ok(())
    }

    /// Index of the segment containing `t`: the largest `i` with `times[i] <= t`.
    pub(crate) fn segment_index(&self, t: f64) -> usize {
        self.times.partition_point(|&x| x <= t) - 1
    }

    /// True when segment `i` carries a single value (hold, degenerate linear,
    /// or the trailing stretch).
    pub(crate) fn segment_is_const(&self, i: usize) -> bool {
        match self.segment_mode(i) {
            SegmentMode::Hold => true,
            SegmentMode::Linear => {
                i + 1 >= self.times.len() || self.knot_value(i) == self.knot_value(i + 1)
            }
        }
    }

    fn interpolate_into(&self, i: usize, t: f64, out: &mut [f64]) {
        let t0 = self.times[i];
        let t1 = self.times[i + 1];
        let r = (t - t0) / (t1 - t0);
        let a = self.knot_value(i);
        let b = self.knot_value(i + 1);
        for k in 0..self.dim {
            out[k] = a[k] + (b[k] - a[k]) * r;
        }
    }

    /// `x(t)`. Exact (the stored value) whenever `t` is a knot time or lies in
    /// a constant stretch.
    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        self.check_domain(t)?;
        let i = self.segment_index(t);
        if t == self.times[i] || self.segment_is_const(i) {
            return Ok(self.knot_value(i).to_vec());
        }
        let mut out = vec![0.0; self.dim];
        self.interpolate_into(i, t, &mut out);
        Ok(out)
    }

    /// `x(t-)`, the left limit. `t = 0` is a domain error (there is nothing to
    /// the left); use the convention `x(0-) := x(0)` at call sites that need it.
    pub fn left_limit(&self, t: f64) -> Result<Vec<f64>> {
        self.check_domain(t)?;
        if t == 0.0 {
            return Err(Error::Domain("left limit undefined at t = 0".into()));
        }
        let i = self.segment_index(t);
        if t == self.times[i] {
            // Approach from the previous segment. A linear segment reaches
            // this knot's value continuously; a hold segment keeps its own.
            return Ok(match self.modes[i - 1] {
                SegmentMode::Hold => self.knot_value(i - 1).to_vec(),
                SegmentMode::Linear => self.knot_value(i).to_vec(),
            });
        }
        // Strictly inside a segment the path is continuous.
        if self.segment_is_const(i) {
            return Ok(self.knot_value(i).to_vec());
        }
        let mut out = vec![0.0; self.dim];
        self.interpolate_into(i, t, &mut out);
        Ok(out)
    }

    /// All jumps, in time order. A jump is a knot whose incoming segment holds
    /// a different value; linear segments are continuous at their right end, so
    /// they never produce one.
    pub fn discontinuities(&self) -> Vec<Jump> {
        let mut out = Vec::new();
        for e in 1..self.times.len() {
            if self.modes[e - 1] == SegmentMode::Hold {
                let left = self.knot_value(e - 1);
                let right = self.knot_value(e);
                if left != right {
                    out.push(Jump {
                        time: self.times[e],
                        left: left.to_vec(),
                        right: right.to_vec(),
                        magnitude: sup_dist(left, right),
                    });
                }
            }
        }
        out
    }

    /// Jumps of magnitude at least `eps` occurring no later than `tmax`.
    pub fn large_jumps(&self, eps: f64, tmax: f64) -> Result<Vec<Jump>> {
        if !(eps > 0.0) {
            return Err(Error::Domain(format!("jump threshold must be > 0, got {eps}")));
        }
        Ok(self
            .discontinuities()
            .into_iter()
            .filter(|j| j.magnitude >= eps && j.time <= tmax)
            .collect())
    }

    /// Left plateau boundary: `sup { s < t : x(s) != x(t) }`, with `sup {} = 0`.
    ///
    /// Equals `t` exactly when the path takes other values immediately to the
    /// left (in particular at every jump time); equals the plateau's start when
    /// `t` sits inside one; `0` when the path is constant on `[0, t]`.
    pub fn eta(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        if t == 0.0 {
            return Ok(0.0);
        }
        let target = self.eval(t)?;
        let mut j = self.segment_index(t);
        let mut pos = t;
        if t > self.times[j] {
            if !self.segment_is_const(j) {
                // Varying linear segment: x takes the value x(t) only at t.
                return Ok(t);
            }
            pos = self.times[j];
        }
        // x == target on [pos, t] with pos == times[j]; extend left while the
        // previous segment carries the same constant value.
        loop {
            if j == 0 {
                return Ok(0.0);
            }
            if !self.segment_is_const(j - 1) || self.knot_value(j - 1) != &target[..] {
                // Either a varying approach (differs everywhere inside) or a
                // different constant: the sup of differing times is `pos`.
                return Ok(pos);
            }
            j -= 1;
            pos = self.times[j];
        }
    }

    /// Right plateau boundary: `inf { s >= t : x(s) != x(t-) }`, with
    /// `inf {} = +inf` ([`THETA_UNBOUNDED`]) and the convention `x(0-) = x(0)`.
    ///
    /// Equals `t` at every jump time (the point itself qualifies) and wherever
    /// the path starts varying immediately; otherwise the end of the plateau
    /// through `t`.
    pub fn theta(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        let lv = if t == 0.0 { self.eval(0.0)? } else { self.left_limit(t)? };
        if self.eval(t)? != lv {
            return Ok(t);
        }
        let mut j = self.segment_index(t);
        if !self.segment_is_const(j) {
            // x(t) == x(t-) on a varying segment: values change immediately.
            return Ok(t);
        }
        loop {
            let e = j + 1;
            if e == self.times.len() {
                return Ok(THETA_UNBOUNDED);
            }
            if self.knot_value(e) != &lv[..] {
                return Ok(self.times[e]);
            }
            if !self.segment_is_const(e) {
                // Same value at the knot but varying just after it.
                return Ok(self.times[e]);
            }
            j = e;
        }
    }

    /// Exact constancy of `x` on the open interval `(a, b)`.
    pub fn is_constant_on(&self, a: f64, b: f64) -> Result<bool> {
        self.check_domain(a)?;
        self.check_domain(b)?;
        if !(a < b) {
            return Err(Error::Domain(format!("need a < b, got ({a}, {b})")));
        }
        let v = self.eval(a)?; // by right continuity: the only candidate value
        let mut j = self.segment_index(a);
        while j < self.times.len() {
            let start = self.times[j];
            if start >= b {
                break;
            }
            let end = if j + 1 < self.times.len() { self.times[j + 1] } else { self.horizon };
            if end > a {
                if !self.segment_is_const(j) {
                    return Ok(false);
                }
                if self.knot_value(j) != &v[..] {
                    return Ok(false);
                }
            }
            j += 1;
        }
        Ok(true)
    }

    /// Restriction to `[0, T]`. Knots beyond `T` are dropped; when `T` falls
    /// strictly inside a varying linear segment a knot with the interpolated
    /// value is appended so the restriction agrees with the original path.
    pub fn restrict(&self, t_max: f64) -> Result<CadlagPath> {
        self.check_domain(t_max)?;
        let i = self.segment_index(t_max);
        let mut knots: Vec<Knot> = (0..=i)
            .map(|k| Knot {
                time: self.times[k],
                value: self.knot_value(k).to_vec(),
                mode: self.segment_mode(k),
            })
            .collect();
        if t_max > self.times[i] && !self.segment_is_const(i) {
            let mut v = vec![0.0; self.dim];
            self.interpolate_into(i, t_max, &mut v);
            knots.push(Knot::hold(t_max, v));
        }
        CadlagPath::from_knots(t_max, knots)
    }

    /// Samples the path on the uniform grid of the given mesh (the horizon is
    /// always included) and writes `t,v1,..,vd` CSV rows.
    pub fn write_grid_csv<W: std::io::Write>(&self, mesh: f64, mut w: W) -> Result<()> {
        if !(mesh > 0.0) {
            return Err(Error::Domain(format!("mesh must be > 0, got {mesh}")));
        }
        let mut header = String::from("t");
        for k in 1..=self.dim {
            let _ = write!(header, ",v{k}");
        }
        writeln!(w, "{header}")?;
        let mut write_row = |t: f64, v: &[f64]| -> Result<()> {
            let mut row = format!("{t}");
            for x in v {
                let _ = write!(row, ",{x}");
            }
            writeln!(w, "{row}")?;
            Ok(())
        };
        let steps = (self.horizon / mesh).floor() as usize;
        for s in 0..=steps {
            let t = (s as f64 * mesh).min(self.horizon);
            write_row(t, &self.eval(t)?)?;
        }
        if steps as f64 * mesh < self.horizon {
            write_row(self.horizon, &self.eval(self.horizon)?)?;
        }
        Ok(())
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("path serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<CadlagPath> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Wire format: `{"dim": d, "horizon": h, "knots": [[t, [v, ..], "hold"], ..]}`.
/// The per-knot mode describes the outgoing segment; the last knot's is
/// conventionally `"hold"`.
#[derive(Serialize, Deserialize)]
struct PathWire {
    dim: usize,
    horizon: f64,
    knots: Vec<(f64, Vec<f64>, SegmentMode)>,
}

impl Serialize for CadlagPath {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = PathWire {
            dim: self.dim,
            horizon: self.horizon,
            knots: (0..self.times.len())
                .map(|i| {
                    let mode = if i + 1 < self.times.len() {
                        self.modes[i]
                    } else {
                        SegmentMode::Hold
                    };
                    (self.times[i], self.knot_value(i).to_vec(), mode)
                })
                .collect(),
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CadlagPath {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = PathWire::deserialize(d)?;
        let knots = wire
            .knots
            .into_iter()
            .map(|(time, value, mode)| Knot { time, value, mode })
            .collect();
        let path =
            CadlagPath::from_knots(wire.horizon, knots).map_err(serde::de::Error::custom)?;
        if path.dim() != wire.dim {
            return Err(serde::de::Error::custom(format!(
                "declared dim {} does not match knot dimension {}",
                wire.dim,
                path.dim()
            )));
        }
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Step path with knots (0,0), (1,5), (3,2) on [0,4]; jumps at 1 and 3.
    fn p1() -> CadlagPath {
        CadlagPath::scalar_step(4.0, &[(0.0, 0.0), (1.0, 5.0), (3.0, 2.0)]).unwrap()
    }

    #[test]
    fn eval_holds_and_knots() {
        let p = p1();
        assert_eq!(p.eval(2.0).unwrap(), vec![5.0]);
        assert_eq!(p.eval(1.0).unwrap(), vec![5.0]); // right continuity at a jump
        assert_eq!(p.eval(0.0).unwrap(), vec![0.0]);
        assert_eq!(p.eval(4.0).unwrap(), vec![2.0]);
        assert!(p.eval(4.5).is_err());
        assert!(p.eval(-0.1).is_err());
    }

    #[test]
    fn left_limits() {
        let p = p1();
        assert_eq!(p.left_limit(1.0).unwrap(), vec![0.0]);
        assert_eq!(p.left_limit(2.0).unwrap(), vec![5.0]);
        assert_eq!(p.left_limit(3.0).unwrap(), vec![5.0]);
        assert!(p.left_limit(0.0).is_err());
    }

    #[test]
    fn linear_segments_are_continuous() {
        let p = CadlagPath::scalar_linear(2.0, &[(0.0, 0.0), (2.0, 4.0)]).unwrap();
        assert_eq!(p.eval(1.0).unwrap(), vec![2.0]);
        assert_eq!(p.left_limit(2.0).unwrap(), vec![4.0]);
        assert!(p.discontinuities().is_empty());
    }

    #[test]
    fn discontinuity_records() {
        let p = p1();
        let jumps = p.discontinuities();
        assert_eq!(jumps.len(), 2);
        assert_eq!((jumps[0].time, jumps[0].left[0], jumps[0].right[0]), (1.0, 0.0, 5.0));
        assert_eq!(jumps[0].magnitude, 5.0);
        assert_eq!((jumps[1].time, jumps[1].left[0], jumps[1].right[0]), (3.0, 5.0, 2.0));
        assert_eq!(jumps[1].magnitude, 3.0);
    }

    #[test]
    fn large_jump_filter() {
        let p = p1();
        let big = p.large_jumps(4.0, 4.0).unwrap();
        assert_eq!(big.len(), 1);
        assert_eq!(big[0].time, 1.0);
        assert!(p.large_jumps(6.0, 4.0).unwrap().is_empty());
        assert!(p.large_jumps(0.0, 4.0).is_err());
    }

    #[test]
    fn eta_examples() {
        let p = p1();
        assert_eq!(p.eta(2.0).unwrap(), 1.0); // inside the [1,3) plateau
        assert_eq!(p.eta(1.0).unwrap(), 1.0); // at a jump: differs just left
        assert_eq!(p.eta(0.5).unwrap(), 0.0); // constant on [0, 0.5]: sup of {} ...
        assert_eq!(p.eta(0.0).unwrap(), 0.0);
    }

    #[test]
    fn theta_examples() {
        let p = p1();
        assert_eq!(p.theta(2.0).unwrap(), 3.0);
        assert_eq!(p.theta(0.5).unwrap(), 1.0);
        assert_eq!(p.theta(3.5).unwrap(), THETA_UNBOUNDED);
        assert_eq!(p.theta(3.0).unwrap(), 3.0); // jump time: the point itself qualifies
        assert_eq!(p.theta(1.0).unwrap(), 1.0);
    }

    #[test]
    fn eta_theta_on_varying_segments() {
        let p = CadlagPath::scalar_linear(2.0, &[(0.0, 0.0), (2.0, 4.0)]).unwrap();
        assert_eq!(p.eta(1.0).unwrap(), 1.0);
        assert_eq!(p.theta(1.0).unwrap(), 1.0);
    }

    #[test]
    fn constancy_checks() {
        let p = p1();
        assert!(p.is_constant_on(1.0, 3.0).unwrap());
        assert!(!p.is_constant_on(0.5, 1.5).unwrap());
        assert!(p.is_constant_on(3.0, 4.0).unwrap());
        assert!(p.is_constant_on(0.0, 1.0).unwrap());
        assert!(p.is_constant_on(1.0, 3.0).unwrap());
        assert!(p.is_constant_on(0.2, 0.7).unwrap());
        assert!(p.is_constant_on(2.0, 3.5).is_ok());
        assert!(!p.is_constant_on(2.0, 3.5).unwrap());
        assert!(p.is_constant_on(1.0, 1.0).is_err());
    }

    #[test]
    fn restriction_keeps_values() {
        let p = p1();
        let r = p.restrict(2.0).unwrap();
        assert_eq!(r.horizon(), 2.0);
        assert_eq!(r.knot_count(), 2);
        assert_eq!(r.eval(2.0).unwrap(), vec![5.0]);

        let ramp = CadlagPath::scalar_linear(2.0, &[(0.0, 0.0), (2.0, 4.0)]).unwrap();
        let half = ramp.restrict(1.0).unwrap();
        assert_eq!(half.eval(1.0).unwrap(), vec![2.0]);
        assert_eq!(half.eval(0.5).unwrap(), vec![1.0]);
    }

    #[test]
    fn validation_rejects_bad_knots() {
        assert!(CadlagPath::scalar_step(4.0, &[(0.5, 0.0)]).is_err());
        assert!(CadlagPath::scalar_step(4.0, &[(0.0, 0.0), (0.0, 1.0)]).is_err());
        assert!(CadlagPath::scalar_step(0.5, &[(0.0, 0.0), (1.0, 1.0)]).is_err());
        assert!(CadlagPath::scalar_step(4.0, &[(0.0, f64::NAN)]).is_err());
        assert!(CadlagPath::from_knots(1.0, vec![]).is_err());
        assert!(CadlagPath::from_knots(
            1.0,
            vec![Knot::hold(0.0, vec![0.0]), Knot::hold(0.5, vec![0.0, 1.0])]
        )
        .is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = p1();
        let s = p.to_json_string();
        let q = CadlagPath::from_json_str(&s).unwrap();
        assert_eq!(p, q);

        let parsed: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(parsed["dim"], 1);
        assert_eq!(parsed["horizon"], 4.0);
        assert_eq!(parsed["knots"][1][0], 1.0);
        assert_eq!(parsed["knots"][1][2], "hold");
    }

    #[test]
    fn json_rejects_invalid() {
        let bad = r#"{"dim":1,"horizon":4.0,"knots":[[1.0,[0.0],"hold"]]}"#;
        assert!(CadlagPath::from_json_str(bad).is_err());
        let mismatch = r#"{"dim":2,"horizon":4.0,"knots":[[0.0,[0.0],"hold"]]}"#;
        assert!(CadlagPath::from_json_str(mismatch).is_err());
    }

    #[test]
    fn csv_sampling() {
        let p = p1();
        let mut buf = Vec::new();
        p.write_grid_csv(1.0, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,v1");
        assert_eq!(lines[1], "0,0");
        assert_eq!(lines[2], "1,5");
        assert_eq!(lines.len(), 6); // header + t = 0..4
    }

    #[test]
    fn multidim_paths() {
        let p = CadlagPath::step(
            2.0,
            vec![(0.0, vec![0.0, 1.0]), (1.0, vec![3.0, 1.0])],
        )
        .unwrap();
        assert_eq!(p.dim(), 2);
        let jumps = p.discontinuities();
        assert_eq!(jumps.len(), 1);
        assert_eq!(jumps[0].magnitude, 3.0); // sup norm over coordinates
        assert_eq!(p.eta(1.5).unwrap(), 1.0);
    }
}
