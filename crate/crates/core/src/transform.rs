//! Path transforms: stair filling, monotone time changes and their right
//! inverses, and the plateau-respecting composition `phi` that rebuilds a
//! process from its spatial and temporal components.
//!
//! Stair filling replaces every plateau that ends in a jump by the straight
//! line from the plateau's start to the jump's landing point. A path whose
//! every jump closes such a plateau inside the horizon therefore becomes
//! continuous.

use crate::path::{CadlagPath, Knot, SegmentMode, THETA_UNBOUNDED};
use crate::{Error, Result};

/// Replaces each plateau that ends in a jump by the chord to the jump's
/// landing point. Plateaus that run into the horizon (or into a varying
/// stretch) are kept as they are, and varying segments pass through
/// unchanged.
pub fn stair_fill(x: &CadlagPath) -> CadlagPath {
    let n = x.knot_count();
    let times = x.knot_times();
    let mut out: Vec<Knot> = Vec::with_capacity(n);
    let mut i = 0usize;
    while i < n {
        if i + 1 < n && !x.segment_is_const(i) {
            out.push(Knot::linear(times[i], x.knot_value(i).to_vec()));
            i += 1;
            continue;
        }
        // Constant run at the value of knot i. It may span several knots when
        // consecutive segments repeat the value.
        let v = x.knot_value(i);
        let mut j = i;
        while j + 1 < n && x.segment_is_const(j) && x.knot_value(j + 1) == v {
            j += 1;
        }
        if j + 1 == n {
            // Runs into the horizon: an unfinished stair stays flat.
            out.push(Knot::hold(times[i], v.to_vec()));
            i = n;
        } else if x.segment_is_const(j) {
            // The run is closed by the jump at times[j+1]: fill the stair.
            out.push(Knot::linear(times[i], v.to_vec()));
            i = j + 1;
        } else {
            // The path starts varying again without a jump.
            out.push(Knot::hold(times[i], v.to_vec()));
            i = j;
        }
    }
    CadlagPath::from_knots(x.horizon(), out).expect("stair fill preserves knot invariants")
}

/// Pointwise form of [`stair_fill`]: the filled value at `t` is the chord
/// between `(eta(t), x(eta(t)))` and `(theta(t), x(theta(t)))` whenever the
/// enclosing plateau ends in a jump, and `x(t)` otherwise. Mirrors the
/// segment interpolation arithmetic, so it agrees with the filled path
/// bit for bit.
pub fn stair_fill_value_at(x: &CadlagPath, t: f64) -> Result<Vec<f64>> {
    let eta = x.eta(t)?;
    let theta = x.theta(t)?;
    let v = x.eval(t)?;
    if theta == THETA_UNBOUNDED || theta == eta {
        return Ok(v);
    }
    let a = x.eval(eta)?;
    let b = x.eval(theta)?;
    let r = (t - eta) / (theta - eta);
    Ok(a.iter().zip(&b).map(|(p, q)| p + (q - p) * r).collect())
}

/// Which one-sided limit a [`OneSidedView`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitSide {
    Left,
    Right,
}

/// Evaluation view of a path's one-sided limits. The left view returns
/// `x(t-)` with the convention `x(0-) := x(0)`; the right view is plain
/// evaluation. A left-continuous function is not itself a cadlag path, so
/// this stays a view instead of materializing knots.
#[derive(Debug, Clone, Copy)]
pub struct OneSidedView<'a> {
    path: &'a CadlagPath,
    side: LimitSide,
}

impl<'a> OneSidedView<'a> {
    pub fn at(&self, t: f64) -> Result<Vec<f64>> {
        match self.side {
            LimitSide::Right => self.path.eval(t),
            LimitSide::Left => {
                if t == 0.0 {
                    self.path.eval(0.0)
                } else {
                    self.path.left_limit(t)
                }
            }
        }
    }

    pub fn side(&self) -> LimitSide {
        self.side
    }
}

pub fn left_limit_view(path: &CadlagPath) -> OneSidedView<'_> {
    OneSidedView {
        path,
        side: LimitSide::Left,
    }
}

pub fn right_limit_view(path: &CadlagPath) -> OneSidedView<'_> {
    OneSidedView {
        path,
        side: LimitSide::Right,
    }
}

/// A one-dimensional nondecreasing path starting at or above zero: a time
/// change. Wraps [`CadlagPath`] with the extra invariants checked once.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonePath {
    path: CadlagPath,
}

impl MonotonePath {
    pub fn new(path: CadlagPath) -> Result<Self> {
        if path.dim() != 1 {
            return Err(Error::InvalidPath(format!(
                "a monotone path must be one-dimensional, got dim {}",
                path.dim()
            )));
        }
        let first = path.knot_value(0)[0];
        if !(first >= 0.0) {
            return Err(Error::InvalidPath(format!(
                "a monotone path must start at or above 0, got {first}"
            )));
        }
        for i in 0..path.knot_count() - 1 {
            let (a, b) = (path.knot_value(i)[0], path.knot_value(i + 1)[0]);
            if b < a {
                return Err(Error::InvalidPath(format!(
                    "knot values decrease from {a} to {b} at t = {}",
                    path.knot_times()[i + 1]
                )));
            }
        }
        Ok(Self { path })
    }

    pub fn as_path(&self) -> &CadlagPath {
        &self.path
    }

    pub fn into_path(self) -> CadlagPath {
        self.path
    }

    /// The terminal value `y(horizon)`, which bounds the inverse's domain.
    pub fn end_value(&self) -> f64 {
        self.path.knot_value(self.path.knot_count() - 1)[0]
    }

    /// Scalar evaluation sugar.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        Ok(self.path.eval(t)?[0])
    }

    /// The right inverse `t -> inf{s : y(s) > t}` on `[0, y(horizon)]`, in
    /// knot form. The value at the right endpoint is the closure convention
    /// `y^{-1}(y(horizon)) := horizon` (the true infimum there may not
    /// exist).
    ///
    /// Plateaus invert to jumps. A plateau whose level was reached by a ramp
    /// would give the inverse a jump off a varying piece, which knot form
    /// cannot express; that shape is reported as a domain error. Step inputs
    /// and ramps that run to the horizon always invert.
    pub fn right_inverse(&self) -> Result<MonotonePath> {
        let p = &self.path;
        let m = p.knot_count();
        let times = p.knot_times();
        let val = |i: usize| p.knot_value(i)[0];
        let horizon = p.horizon();
        let end = val(m - 1);
        let mut out: Vec<Knot> = Vec::new();
        if val(0) > 0.0 {
            // Levels below the starting value are exceeded immediately.
            out.push(Knot::hold(0.0, vec![0.0]));
        }
        for i in 0..m - 1 {
            let (a, b) = (val(i), val(i + 1));
            if p.segment_is_const(i) {
                if b > a {
                    // Plateau at `a` closed by the jump at times[i+1]: every
                    // level in [a, b) is first exceeded at that instant.
                    out.push(Knot::hold(a, vec![times[i + 1]]));
                }
            } else {
                // Ramp from `a` to `b`: levels in [a, b) are crossed
                // linearly, so the inverse ramps from times[i] to times[i+1].
                out.push(Knot::linear(a, vec![times[i]]));
                let flat_after = if i + 2 < m {
                    p.segment_is_const(i + 1)
                } else {
                    horizon > times[i + 1]
                };
                if flat_after {
                    return Err(Error::Domain(format!(
                        "right inverse is not representable in knot form: the ramp ending at \
                         t = {} runs into a constant stretch",
                        times[i + 1]
                    )));
                }
            }
        }
        out.push(Knot::hold(end, vec![horizon]));
        MonotonePath::new(
            CadlagPath::from_knots(end, out).expect("inverse sweep preserves knot invariants"),
        )
    }

    /// Pointwise right inverse `inf{s : y(s) > t}`, valid for every monotone
    /// path (including shapes [`Self::right_inverse`] cannot represent). The
    /// right endpoint uses the same closure convention.
    pub fn inverse_value_at(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::Domain(format!(
                "inverse argument must be finite and >= 0, got {t}"
            )));
        }
        let end = self.end_value();
        if t > end {
            return Err(Error::Domain(format!(
                "inverse argument {t} exceeds the terminal value {end}"
            )));
        }
        if t == end {
            return Ok(self.path.horizon());
        }
        let p = &self.path;
        let m = p.knot_count();
        let val = |i: usize| p.knot_value(i)[0];
        // First knot whose value exceeds t (knot values are nondecreasing).
        let mut lo = 0usize;
        let mut hi = m;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if val(mid) <= t {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo == 0 {
            return Ok(0.0);
        }
        debug_assert!(lo < m, "t < end implies some knot value exceeds t");
        let times = p.knot_times();
        if p.segment_is_const(lo - 1) {
            // The level is cleared by the jump into knot `lo`.
            Ok(times[lo])
        } else {
            let (a, b) = (val(lo - 1), val(lo));
            Ok(times[lo - 1] + (t - a) / (b - a) * (times[lo] - times[lo - 1]))
        }
    }
}

impl std::ops::Deref for MonotonePath {
    type Target = CadlagPath;

    fn deref(&self) -> &CadlagPath {
        &self.path
    }
}

impl TryFrom<CadlagPath> for MonotonePath {
    type Error = Error;

    fn try_from(path: CadlagPath) -> Result<Self> {
        MonotonePath::new(path)
    }
}

/// Free-function form of [`MonotonePath::right_inverse`].
pub fn right_inverse(y: &MonotonePath) -> Result<MonotonePath> {
    y.right_inverse()
}

/// Emits the knots of `t -> f(u(t))` on `[a, b)`, where `u` maps `[a, b)`
/// affinely onto `[u0, u1)`. Knot values come from `f` exactly; only knot
/// times pass through the affine map (which is skipped entirely when it is
/// the identity, keeping times exact too). The caller emits the value at `b`.
fn emit_time_changed_span(
    f: &CadlagPath,
    u0: f64,
    u1: f64,
    a: f64,
    b: f64,
    out: &mut Vec<Knot>,
) -> Result<()> {
    let identity = u0 == a && u1 == b;
    let map = |u: f64| {
        if identity {
            u
        } else {
            a + (u - u0) / (u1 - u0) * (b - a)
        }
    };
    let times = f.knot_times();
    let mut u = u0;
    let mut seg = f.segment_index(u0);
    loop {
        let mode = if f.segment_is_const(seg) {
            SegmentMode::Hold
        } else {
            SegmentMode::Linear
        };
        out.push(Knot {
            time: map(u),
            value: f.eval(u)?,
            mode,
        });
        let seg_end = if seg + 1 < f.knot_count() {
            times[seg + 1]
        } else {
            f.horizon()
        };
        if seg_end >= u1 {
            return Ok(());
        }
        u = seg_end;
        seg += 1;
    }
}

/// The composition `t -> f(g(t))` on `[0, g.horizon()]`, in knot form.
/// Requires `f` to be defined up to `g`'s terminal value. Jumps of `g` land
/// after constant stretches, and jumps of `f` are preceded by plateaus, so
/// the composition is always representable.
pub fn compose(f: &CadlagPath, g: &MonotonePath) -> Result<CadlagPath> {
    if f.horizon() < g.end_value() {
        return Err(Error::Domain(format!(
            "inner path reaches {} but the outer path ends at {}",
            g.end_value(),
            f.horizon()
        )));
    }
    let gp = g.as_path();
    let m = gp.knot_count();
    let times = gp.knot_times();
    let val = |i: usize| gp.knot_value(i)[0];
    let mut out: Vec<Knot> = Vec::new();
    for i in 0..m {
        if i + 1 == m || gp.segment_is_const(i) {
            out.push(Knot::hold(times[i], f.eval(val(i))?));
        } else {
            emit_time_changed_span(f, val(i), val(i + 1), times[i], times[i + 1], &mut out)?;
        }
    }
    CadlagPath::from_knots(gp.horizon(), out)
}

/// `phi(x, y)`: the path `x` run on the clock that spends the waiting time of
/// `y`'s jumps frozen. On the level axis `t`, a jump of `y` at time `tau`
/// over `[y(tau-), y(tau))` contributes a plateau holding `x(tau-)`; where
/// `y` ramps, `x` passes through with its time axis rescaled; levels below
/// `y(0)` hold `x(0)`. The terminal value is the closure `x(y.horizon())`.
///
/// For a pure jump `y` with `y(0) = 0`, the result evaluated at `y`'s
/// terminal levels reproduces `x` indexed by `y`'s jump count, which is how
/// a walk subordinated to a renewal clock is assembled from its components.
pub fn phi(x: &CadlagPath, y: &MonotonePath) -> Result<CadlagPath> {
    let yp = y.as_path();
    if x.horizon() < yp.horizon() {
        return Err(Error::Domain(format!(
            "outer path ends at {} but the clock runs to {}",
            x.horizon(),
            yp.horizon()
        )));
    }
    let m = yp.knot_count();
    let times = yp.knot_times();
    let val = |i: usize| yp.knot_value(i)[0];
    let end = y.end_value();
    let mut out: Vec<Knot> = Vec::new();
    if val(0) > 0.0 {
        out.push(Knot::hold(0.0, x.eval(0.0)?));
    }
    // A ramp piece interpolates toward whatever knot follows it. The value
    // emitted at the ramp's end level must therefore equal the limit x
    // approaches at the ramp's end time, or the result is not a cadlag path
    // in knot form.
    let mut pending_ramp_end: Option<f64> = None;
    let check_junction = |out: &Vec<Knot>,
                              pending: &mut Option<f64>,
                              next_value: &[f64]|
     -> Result<()> {
        if let Some(u1) = pending.take() {
            if matches!(out.last(), Some(k) if k.mode == SegmentMode::Linear) {
                let approach = x.left_limit(u1)?;
                if approach != next_value {
                    return Err(Error::Domain(
                        "phi output is not representable in knot form: a rescaled varying \
                         stretch runs into a different value"
                            .into(),
                    ));
                }
            }
        }
        Ok(())
    };
    for i in 0..m - 1 {
        let (a, b) = (val(i), val(i + 1));
        if yp.segment_is_const(i) {
            if b > a {
                // y jumps at times[i+1]; on levels [a, b) the inverse clock
                // holds at that instant, which x has not yet reached.
                let v = x.left_limit(times[i + 1])?;
                check_junction(&out, &mut pending_ramp_end, &v)?;
                out.push(Knot::hold(a, v));
            }
        } else {
            let first = x.eval(times[i])?;
            check_junction(&out, &mut pending_ramp_end, &first)?;
            emit_time_changed_span(x, times[i], times[i + 1], a, b, &mut out)?;
            pending_ramp_end = Some(times[i + 1]);
        }
    }
    let closing = x.eval(yp.horizon())?;
    check_junction(&out, &mut pending_ramp_end, &closing)?;
    out.push(Knot::hold(end, closing));
    CadlagPath::from_knots(end, out)
}

/// Pointwise form of [`phi`]: exact evaluation at a single level, derived
/// from `y`'s structure without building the composed path. Valid for every
/// monotone clock, including shapes the knot form cannot carry.
pub fn phi_value_at(x: &CadlagPath, y: &MonotonePath, t: f64) -> Result<Vec<f64>> {
    let end = y.end_value();
    if !t.is_finite() || t < 0.0 || t > end {
        return Err(Error::Domain(format!(
            "phi argument must lie in [0, {end}], got {t}"
        )));
    }
    if t < y.as_path().knot_value(0)[0] {
        return x.eval(0.0);
    }
    // Inside a jump gap of y the clock holds at the jump instant tau and the
    // value is x(tau-).
    for jump in y.as_path().discontinuities() {
        let (lo, hi) = (jump.left[0], jump.right[0]);
        if t >= lo && t < hi {
            return x.left_limit(jump.time);
        }
    }
    x.eval(y.inverse_value_at(t)?)
}

/// The right inverse of `y` composed with itself through its own inverse:
/// `(y o y^{-1})^{-1}`. For clocks starting at zero this coincides with
/// [`phi`] applied to the pair `(y, y)`, which gives the two computations an
/// independent cross-check.
pub fn inverse_of_composed(y: &MonotonePath) -> Result<MonotonePath> {
    let w = y.right_inverse()?;
    let c = compose(y.as_path(), &w)?;
    MonotonePath::new(c)?.right_inverse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn p1() -> CadlagPath {
        CadlagPath::scalar_step(4.0, &[(0.0, 0.0), (1.0, 5.0), (3.0, 2.0)]).unwrap()
    }

    /// t on [0,1), 1 on [1,2), t on [2,3]: one stair inside a moving path.
    fn ramp_stair_ramp() -> CadlagPath {
        CadlagPath::from_knots(
            3.0,
            vec![
                Knot::linear(0.0, vec![0.0]),
                Knot::hold(1.0, vec![1.0]),
                Knot::linear(2.0, vec![2.0]),
                Knot::hold(3.0, vec![3.0]),
            ],
        )
        .unwrap()
    }

    fn two_step_clock() -> MonotonePath {
        // y(s) = 2 * floor(s) on [0, 3]
        MonotonePath::new(
            CadlagPath::scalar_step(3.0, &[(0.0, 0.0), (1.0, 2.0), (2.0, 4.0), (3.0, 6.0)])
                .unwrap(),
        )
        .unwrap()
    }

    /// Evenly spaced probe points with exact endpoints.
    fn grid(end: f64, n: usize) -> impl Iterator<Item = f64> {
        (0..=n).map(move |k| {
            if k == n {
                end
            } else {
                end * k as f64 / n as f64
            }
        })
    }

    fn random_step(rng: &mut StdRng, horizon: f64, knots: usize) -> CadlagPath {
        let mut ts = vec![0.0];
        for _ in 1..knots {
            ts.push(rng.random_range(0.0..horizon));
        }
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ts.dedup();
        let pts: Vec<(f64, f64)> = ts
            .iter()
            .map(|&t| (t, rng.random_range(-5.0..5.0)))
            .collect();
        CadlagPath::scalar_step(horizon, &pts).unwrap()
    }

    fn random_clock(rng: &mut StdRng, horizon: f64, knots: usize) -> MonotonePath {
        let mut ts = vec![0.0];
        for _ in 1..knots {
            ts.push(rng.random_range(0.0..horizon));
        }
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ts.dedup();
        let mut level = 0.0;
        let pts: Vec<(f64, f64)> = ts
            .iter()
            .map(|&t| {
                let v = level;
                level += rng.random_range(0.0..2.0);
                (t, v)
            })
            .collect();
        MonotonePath::new(CadlagPath::scalar_step(horizon, &pts).unwrap()).unwrap()
    }

    #[test]
    fn stair_fill_fills_closed_plateaus() {
        let f = stair_fill(&p1());
        assert_eq!(f.eval(2.0).unwrap(), vec![3.5]);
        assert_eq!(f.eval(0.5).unwrap(), vec![2.5]);
        assert_eq!(f.eval(1.0).unwrap(), vec![5.0]);
        assert_eq!(f.eval(3.5).unwrap(), vec![2.0]);
        assert!(f.discontinuities().is_empty());
        assert_eq!(f.knot_count(), 3);
        assert_eq!(f.segment_mode(0), SegmentMode::Linear);
        assert_eq!(f.segment_mode(1), SegmentMode::Linear);
    }

    #[test]
    fn stair_fill_straightens_the_unit_stair() {
        let f = stair_fill(&ramp_stair_ramp());
        for k in 0..=30 {
            let t = k as f64 * 0.1;
            assert!(
                (f.eval(t).unwrap()[0] - t).abs() < 1e-12,
                "f(x) should be the identity at {t}"
            );
        }
        assert!(f.discontinuities().is_empty());
    }

    #[test]
    fn stair_fill_keeps_unclosed_plateaus() {
        // Plateau into the horizon: nothing to fill.
        let p = CadlagPath::scalar_step(3.0, &[(0.0, 1.0), (1.0, 4.0)]).unwrap();
        let f = stair_fill(&p);
        assert_eq!(f.eval(2.5).unwrap(), vec![4.0]);
        assert_eq!(f.eval(0.5).unwrap(), vec![2.5]);
    }

    #[test]
    fn stair_fill_merges_redundant_plateau_knots() {
        // Three knots carry the same value before the jump; the fill must
        // start at the first of them.
        let p = CadlagPath::scalar_step(
            4.0,
            &[(0.0, 0.0), (1.0, 1.0), (1.5, 1.0), (2.0, 1.0), (3.0, 7.0)],
        )
        .unwrap();
        let f = stair_fill(&p);
        // Chord from (1, 1) to (3, 7).
        assert_eq!(f.eval(2.0).unwrap(), vec![4.0]);
        assert_eq!(f.eval(1.0).unwrap(), vec![1.0]);
        // The opening plateau (value 0 until the jump at 1) fills too.
        assert_eq!(f.eval(0.5).unwrap(), vec![0.5]);
    }

    #[test]
    fn stair_fill_matches_pointwise_form_exactly() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let knots = rng.random_range(2..12);
            let x = random_step(&mut rng, 10.0, knots);
            let f = stair_fill(&x);
            for _ in 0..40 {
                let t = rng.random_range(0.0..=10.0);
                assert_eq!(
                    f.eval(t).unwrap(),
                    stair_fill_value_at(&x, t).unwrap(),
                    "pointwise and structural fill disagree at t = {t}"
                );
            }
            for &t in x.knot_times() {
                assert_eq!(f.eval(t).unwrap(), stair_fill_value_at(&x, t).unwrap());
            }
        }
    }

    #[test]
    fn one_sided_views() {
        let p = p1();
        assert_eq!(left_limit_view(&p).at(1.0).unwrap(), vec![0.0]);
        assert_eq!(left_limit_view(&p).at(0.0).unwrap(), vec![0.0]);
        assert_eq!(right_limit_view(&p).at(1.0).unwrap(), vec![5.0]);
    }

    #[test]
    fn monotone_validation() {
        let down = CadlagPath::scalar_step(2.0, &[(0.0, 1.0), (1.0, 0.5)]).unwrap();
        assert!(MonotonePath::new(down).is_err());
        let neg = CadlagPath::scalar_step(2.0, &[(0.0, -0.5), (1.0, 1.0)]).unwrap();
        assert!(MonotonePath::new(neg).is_err());
        let wide = CadlagPath::step(2.0, vec![(0.0, vec![0.0, 0.0])]).unwrap();
        assert!(MonotonePath::new(wide).is_err());
    }

    #[test]
    fn right_inverse_of_the_two_step_clock() {
        let w = two_step_clock().right_inverse().unwrap();
        assert_eq!(w.horizon(), 6.0);
        assert_eq!(w.value_at(0.0).unwrap(), 1.0);
        assert_eq!(w.value_at(1.0).unwrap(), 1.0);
        assert_eq!(w.value_at(2.0).unwrap(), 2.0);
        assert_eq!(w.value_at(5.0).unwrap(), 3.0);
        assert_eq!(w.value_at(6.0).unwrap(), 3.0); // closure at the end
    }

    #[test]
    fn right_inverse_of_a_ramp() {
        let y = MonotonePath::new(
            CadlagPath::scalar_linear(1.0, &[(0.0, 0.0), (1.0, 2.0)]).unwrap(),
        )
        .unwrap();
        let w = y.right_inverse().unwrap();
        assert_eq!(w.horizon(), 2.0);
        assert_eq!(w.value_at(1.0).unwrap(), 0.5);
        assert_eq!(w.value_at(2.0).unwrap(), 1.0);
        assert_eq!(w.value_at(0.0).unwrap(), 0.0);
    }

    #[test]
    fn right_inverse_rejects_ramp_into_plateau() {
        // y ramps to 1 on [0,1) and then holds: the inverse would jump off a
        // varying piece at level 1, which knot form cannot carry.
        let y = MonotonePath::new(
            CadlagPath::from_knots(
                2.0,
                vec![Knot::linear(0.0, vec![0.0]), Knot::hold(1.0, vec![1.0])],
            )
            .unwrap(),
        )
        .unwrap();
        assert!(y.right_inverse().is_err());
        // The pointwise inverse still answers.
        assert_eq!(y.inverse_value_at(0.5).unwrap(), 0.5);
        assert_eq!(y.inverse_value_at(1.0).unwrap(), 2.0);
    }

    #[test]
    fn right_inverse_handles_positive_start() {
        let y = MonotonePath::new(
            CadlagPath::scalar_step(2.0, &[(0.0, 1.0), (1.0, 3.0)]).unwrap(),
        )
        .unwrap();
        let w = y.right_inverse().unwrap();
        assert_eq!(w.value_at(0.5).unwrap(), 0.0);
        assert_eq!(w.value_at(1.0).unwrap(), 1.0);
        assert_eq!(w.value_at(2.9).unwrap(), 1.0);
        assert_eq!(w.value_at(3.0).unwrap(), 2.0);
    }

    #[test]
    fn pointwise_inverse_matches_the_knot_form() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..100 {
            let k = rng.random_range(2..10);
            let y = random_clock(&mut rng, 8.0, k);
            let w = y.right_inverse().unwrap();
            let end = y.end_value();
            for t in grid(end, 50) {
                assert_eq!(
                    w.value_at(t).unwrap(),
                    y.inverse_value_at(t).unwrap(),
                    "pointwise inverse disagrees at level {t}"
                );
            }
        }
    }

    #[test]
    fn double_inverse_recovers_step_clocks() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..100 {
            let k = rng.random_range(2..10);
            let y = random_clock(&mut rng, 8.0, k);
            let back = y.right_inverse().unwrap().right_inverse().unwrap();
            assert_eq!(back.horizon(), y.horizon());
            for t in grid(y.horizon(), 80) {
                assert_eq!(
                    back.value_at(t).unwrap(),
                    y.value_at(t).unwrap(),
                    "double inverse disagrees at t = {t}"
                );
            }
        }
    }

    #[test]
    fn compose_spec_values() {
        let y = two_step_clock();
        let w = y.right_inverse().unwrap();
        let c = compose(y.as_path(), &w).unwrap();
        assert_eq!(c.horizon(), 6.0);
        assert_eq!(c.eval(0.0).unwrap(), vec![2.0]);
        assert_eq!(c.eval(1.9).unwrap(), vec![2.0]);
        assert_eq!(c.eval(2.0).unwrap(), vec![4.0]);
        assert_eq!(c.eval(4.0).unwrap(), vec![6.0]);
        assert_eq!(c.eval(6.0).unwrap(), vec![6.0]);
    }

    #[test]
    fn compose_with_ramp_clock_rescales() {
        // g(t) = 2t on [0, 1]; f = p1 restricted to values reached.
        let g = MonotonePath::new(
            CadlagPath::scalar_linear(1.0, &[(0.0, 0.0), (1.0, 2.0)]).unwrap(),
        )
        .unwrap();
        let f = p1();
        let c = compose(&f, &g).unwrap();
        assert_eq!(c.eval(0.25).unwrap(), vec![0.0]); // f(0.5)
        assert_eq!(c.eval(0.5).unwrap(), vec![5.0]); // f(1)
        assert_eq!(c.eval(0.75).unwrap(), vec![5.0]); // f(1.5)
        assert_eq!(c.eval(1.0).unwrap(), vec![5.0]); // f(2)
        // The jump of f at 1 maps to a jump of c at 0.5.
        let jumps = c.discontinuities();
        assert_eq!(jumps.len(), 1);
        assert_eq!(jumps[0].time, 0.5);
    }

    #[test]
    fn phi_reassembles_the_frozen_walk() {
        // Spatial component: partial sums 0, 1, -1 at integer indexes.
        let s = CadlagPath::scalar_step(2.0, &[(0.0, 0.0), (1.0, 1.0), (2.0, -1.0)]).unwrap();
        // Clock: renewal instants 0, 0.5, 2.0 at those indexes.
        let t = MonotonePath::new(
            CadlagPath::scalar_step(2.0, &[(0.0, 0.0), (1.0, 0.5), (2.0, 2.0)]).unwrap(),
        )
        .unwrap();
        let r = phi(&s, &t).unwrap();
        assert_eq!(r.horizon(), 2.0);
        assert_eq!(r.eval(0.25).unwrap(), vec![0.0]);
        assert_eq!(r.eval(0.5).unwrap(), vec![1.0]);
        assert_eq!(r.eval(1.0).unwrap(), vec![1.0]);
        assert_eq!(r.eval(2.0).unwrap(), vec![-1.0]);
        // Knot-for-knot the renewal pairs (T_k, S_k).
        assert_eq!(r.knot_times(), &[0.0, 0.5, 2.0]);
        assert_eq!(r.knot_value(0), &[0.0]);
        assert_eq!(r.knot_value(1), &[1.0]);
        assert_eq!(r.knot_value(2), &[-1.0]);
    }

    #[test]
    fn phi_with_identity_clock_is_identity() {
        let x = p1();
        let e = MonotonePath::new(CadlagPath::identity(4.0).unwrap()).unwrap();
        let z = phi(&x, &e).unwrap();
        assert_eq!(z.horizon(), 4.0);
        for k in 0..=40 {
            let t = k as f64 * 0.1;
            assert_eq!(z.eval(t).unwrap(), x.eval(t).unwrap(), "differs at {t}");
        }
        for &t in x.knot_times() {
            assert_eq!(z.eval(t).unwrap(), x.eval(t).unwrap());
        }
    }

    #[test]
    fn phi_matches_pointwise_form() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..100 {
            let k = rng.random_range(2..8);
            let y = random_clock(&mut rng, 6.0, k);
            let kx = rng.random_range(2..10);
            let x = random_step(&mut rng, 6.0, kx);
            let z = phi(&x, &y).unwrap();
            let end = y.end_value();
            for t in grid(end, 60) {
                assert_eq!(
                    z.eval(t).unwrap(),
                    phi_value_at(&x, &y, t).unwrap(),
                    "phi forms disagree at level {t}"
                );
            }
        }
    }

    #[test]
    fn composed_inverse_matches_phi_on_jump_clocks() {
        let y = two_step_clock();
        let a = inverse_of_composed(&y).unwrap();
        let b = phi(y.as_path(), &y).unwrap();
        assert_eq!(a.value_at(1.0).unwrap(), 0.0);
        assert_eq!(b.eval(1.0).unwrap(), vec![0.0]);
        assert_eq!(a.value_at(2.0).unwrap(), 2.0);
        assert_eq!(b.eval(2.0).unwrap(), vec![2.0]);
        assert_eq!(a.as_path().knot_times(), b.knot_times());
        for i in 0..b.knot_count() {
            assert_eq!(a.as_path().knot_value(i), b.knot_value(i));
        }
    }

    #[test]
    fn composed_inverse_matches_phi_on_random_clocks() {
        let mut rng = StdRng::seed_from_u64(19);
        for _ in 0..100 {
            let k = rng.random_range(2..10);
            let y = random_clock(&mut rng, 8.0, k);
            let a = inverse_of_composed(&y).unwrap();
            let b = phi(y.as_path(), &y).unwrap();
            let end = y.end_value();
            for t in grid(end, 60) {
                assert_eq!(
                    a.value_at(t).unwrap(),
                    b.eval(t).unwrap()[0],
                    "routes disagree at level {t}"
                );
            }
        }
    }

    #[test]
    fn phi_rejects_short_outer_path() {
        let x = CadlagPath::scalar_step(1.0, &[(0.0, 0.0)]).unwrap();
        let y = two_step_clock(); // horizon 3 > 1
        assert!(phi(&x, &y).is_err());
    }
}
