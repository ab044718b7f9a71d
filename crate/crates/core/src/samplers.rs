//! Random-variate samplers used by the simulators.
//!
//! Everything here is parameterized by an explicit RNG so that a simulation is
//! a pure function of `(config, seed)`. Replicates draw from separate ChaCha
//! streams of one seed ([`replicate_rng`]), which keeps replicate `k`
//! bit-identical no matter how many replicates run or in what order.
//!
//! Conventions (these normalizations are what the scaling-limit comparisons
//! rely on, so they are pinned by Monte Carlo transform tests):
//!
//! * [`pareto`]: support `[1, inf)` with survival `P(X > t) = t^(-beta)`.
//! * [`positive_stable`]: Laplace transform `E exp(-lam S) = exp(-lam^beta)`.
//! * [`symmetric_stable`]: characteristic function `exp(-|t|^alpha)`.
//! * [`gaussian`]: mean zero, standard deviation `std`.
//! * [`exponential`]: mean `mean`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

/// RNG for replicate `replicate` of the experiment seeded by `seed`.
///
/// Stream-splitting: the seed picks the key, the replicate index picks the
/// stream, so distinct replicates are independent while each one is
/// reproducible in isolation.
pub fn replicate_rng(seed: u64, replicate: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    rng
}

/// Uniform draw from the open interval `(0, 1)`.
///
/// Resamples the (measure-zero, but reachable) exact 0.0 so callers can take
/// logs and reciprocals without guards.
fn uniform_open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// Strictly positive unit-mean exponential draw.
fn exp_positive<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let w: f64 = Exp1.sample(rng);
        if w > 0.0 {
            return w;
        }
    }
}

/// Mean-zero gaussian with standard deviation `std` (`std > 0`).
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, std: f64) -> f64 {
    debug_assert!(std > 0.0);
    let z: f64 = StandardNormal.sample(rng);
    std * z
}

/// Exponential draw with mean `mean` (`mean > 0`).
pub fn exponential<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> f64 {
    debug_assert!(mean > 0.0);
    mean * exp_positive(rng)
}

/// Pareto draw: `P(X > t) = t^(-beta)` for `t >= 1` (`beta > 0`).
///
/// For `beta` in `(0, 1)` the normalized partial sums `n^(-1/beta) * sum`
/// converge to the one-sided stable law with Laplace exponent
/// `gamma(1 - beta) * lam^beta`; [`gamma_one_minus`] supplies that constant to
/// the limit simulator.
pub fn pareto<R: Rng + ?Sized>(rng: &mut R, beta: f64) -> f64 {
    debug_assert!(beta > 0.0);
    uniform_open01(rng).powf(-1.0 / beta)
}

/// Standard one-sided `beta`-stable draw, `beta` in `(0, 1)`, normalized so
/// that `E exp(-lam S) = exp(-lam^beta)`.
///
/// Kanter's representation: with `U` uniform on `(0, pi)` and `W` unit
/// exponential,
///
/// ```text
/// a(u) = (sin(beta u) / sin u)^(beta / (1 - beta)) * sin((1 - beta) u) / sin u
/// S    = (a(U) / W)^((1 - beta) / beta)
/// ```
pub fn positive_stable<R: Rng + ?Sized>(rng: &mut R, beta: f64) -> f64 {
    debug_assert!(beta > 0.0 && beta < 1.0);
    let u = std::f64::consts::PI * uniform_open01(rng);
    let w = exp_positive(rng);
    let sin_u = u.sin();
    let a = (beta * u).sin() / sin_u;
    let b = ((1.0 - beta) * u).sin() / sin_u;
    let factor = a.powf(beta / (1.0 - beta)) * b;
    (factor / w).powf((1.0 - beta) / beta)
}

/// Standard symmetric `alpha`-stable draw, `alpha` in `(0, 2]`, normalized so
/// that the characteristic function is `exp(-|t|^alpha)`.
///
/// Chambers-Mallows-Stuck with zero skew: with `V` uniform on
/// `(-pi/2, pi/2)` and `W` unit exponential,
///
/// ```text
/// X = sin(alpha V) / (cos V)^(1/alpha) * (cos((1 - alpha) V) / W)^((1 - alpha) / alpha)
/// ```
///
/// At `alpha = 1` the second factor has exponent zero and the formula
/// collapses to `tan V`, the standard Cauchy. At `alpha = 2` the law is
/// gaussian with variance 2 (not 1), which is what `exp(-t^2)` means; the
/// Brownian simulator uses [`gaussian`] directly instead.
pub fn symmetric_stable<R: Rng + ?Sized>(rng: &mut R, alpha: f64) -> f64 {
    debug_assert!(alpha > 0.0 && alpha <= 2.0);
    let v = std::f64::consts::FRAC_PI_2 * (2.0 * uniform_open01(rng) - 1.0);
    let w = exp_positive(rng);
    if alpha == 1.0 {
        return v.tan();
    }
    let lead = (alpha * v).sin() / v.cos().powf(1.0 / alpha);
    let tail = (((1.0 - alpha) * v).cos() / w).powf((1.0 - alpha) / alpha);
    lead * tail
}

/// `gamma(1 - beta)` for `beta` in `(0, 1)`: the tail constant that converts
/// the standardized stable Laplace exponent `lam^beta` into the one a
/// unit-scale Pareto sum produces, `gamma(1 - beta) * lam^beta`.
pub fn gamma_one_minus(beta: f64) -> f64 {
    debug_assert!(beta > 0.0 && beta < 1.0);
    libm::tgamma(1.0 - beta)
}
