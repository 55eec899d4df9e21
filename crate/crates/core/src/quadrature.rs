//! Schröder's integral for Gregory coefficients,
//!
//! ```text
//! G_n = (-1)^(n+1) ∫_0^∞ du / ((ln²u + π²) (u + 1)^n),
//! ```
//!
//! evaluated at arbitrary precision for integer `n >= 1` and for real order
//! `s >= 1`.
//!
//! The integral is split at `u = 1`. On `[0, 1]` the substitution `u = e^{-v}`
//! and on `[1, ∞)` the substitution `u = e^{w}` give integrands
//! `e^{±x} / ((x² + π²)(1 + e^{±x})^s)` on `(0, ∞)` that are smooth at the
//! origin. Each half goes through exp-sinh quadrature. The far tails are cut
//! where the analytic bound from [`tail_bound`] drops below the target, so the
//! slow `1/(u ln²u)` decay at `s = 1` is accounted for rigorously rather than
//! by a fixed cutoff.

use std::f64::consts::PI;

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::de::{self, Map, Rule};
use crate::{Error, Precision, Result};

/// Portion of the accuracy target given to each truncated piece. Small enough
/// that the trapezoid end terms are far below the quadrature tolerance.
const TRUNCATION_SHARE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureConfig {
    /// Integrand evaluations allowed per quadrature before giving up.
    pub max_evaluations: usize,
    /// Number of step halvings allowed.
    pub max_level: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            max_evaluations: 400_000,
            max_level: 12,
        }
    }
}

#[derive(Debug, Clone)]
pub struct QuadratureResult {
    /// The order `s` (equal to `n` for integer evaluations).
    pub order: Float,
    /// Signed value, `(-1)^(n+1)` times the magnitude for integer order. For
    /// non-integer order no sign is defined and `value == magnitude`.
    pub value: Float,
    /// The raw, positive integral.
    pub magnitude: Float,
    /// Heuristic quadrature error (difference of the last two levels).
    pub error_estimate: Float,
    /// Rigorous bound on everything dropped by truncating the domain.
    pub tail_bound: Float,
    pub evaluations: usize,
    pub precision: Precision,
}

impl QuadratureResult {
    /// `error_estimate + tail_bound`.
    pub fn error_bound(&self) -> Float {
        Float::with_val(self.precision.bits(), &self.error_estimate + &self.tail_bound)
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Order {
    Integer(u32),
    Real(Float),
}

impl Order {
    fn from_float(s: &Float) -> Result<Order> {
        if s.is_nan() || *s < 1 {
            return Err(Error::domain("s", s.to_f64(), "[1, ∞)"));
        }
        if s.is_integer() && *s <= u32::MAX {
            return Ok(Order::Integer(s.to_u32_saturating().expect("checked range")));
        }
        if s.is_infinite() {
            return Err(Error::domain("s", s.to_f64(), "[1, ∞)"));
        }
        Ok(Order::Real(s.clone()))
    }

    fn to_float(&self, prec: u32) -> Float {
        match self {
            Order::Integer(n) => Float::with_val(prec, *n),
            Order::Real(s) => Float::with_val(prec, s),
        }
    }

    fn to_f64(&self) -> f64 {
        match self {
            Order::Integer(n) => *n as f64,
            Order::Real(s) => s.to_f64(),
        }
    }
}

/// `e^w / (1 + e^w)^s` for any real `w` without overflow.
pub(crate) fn log_weight(w: &Float, order: &Order) -> Float {
    let prec = w.prec();
    // y = e^{-|w|} in (0, 1]
    let y = Float::with_val(prec, -w.clone().abs()).exp();
    let inv_pow = match order {
        Order::Integer(n) => Float::with_val(prec, 1u32 + &y).pow(*n).recip(),
        Order::Real(s) => {
            let l = Float::with_val(prec, y.ln_1p_ref());
            (-(l * s)).exp()
        }
    };
    if w.is_sign_negative() {
        return y * inv_pow;
    }
    let factor = match order {
        Order::Integer(1) => return inv_pow,
        Order::Integer(n) => Float::with_val(prec, w * (1i64 - *n as i64)).exp(),
        Order::Real(s) => Float::with_val(prec, 1u32 - s.clone()) * w,
    };
    match order {
        Order::Real(_) => factor.exp() * inv_pow,
        Order::Integer(_) => factor * inv_pow,
    }
}

/// Integrand in logarithmic coordinates, `g(w) = f(e^w) e^w`.
fn log_integrand(w: &Float, order: &Order, pi_sq: &Float) -> Float {
    let denom = Float::with_val(w.prec(), w.square_ref()) + pi_sq;
    log_weight(w, order) / denom
}

/// `f(u) = 1 / ((ln²u + π²)(u + 1)^s)` with `f(0) = 0` by continuity.
pub fn integrand(u: &Float, s: &Float) -> Result<Float> {
    if u.is_nan() || u.is_sign_negative() && !u.is_zero() {
        return Err(Error::domain("u", u.to_f64(), "[0, ∞)"));
    }
    if s.is_nan() || *s < 1 {
        return Err(Error::domain("s", s.to_f64(), "[1, ∞)"));
    }
    let prec = u.prec().max(s.prec());
    if u.is_zero() || u.is_infinite() {
        return Ok(Float::new(prec));
    }
    let pi = Float::with_val(prec, Constant::Pi);
    let ln = Float::with_val(prec, u.ln_ref());
    let denom = ln.square() + pi.square();
    let base = Float::with_val(prec, u + 1u32);
    let power = match Order::from_float(s)? {
        Order::Integer(n) => base.pow(n),
        Order::Real(s) => base.pow(&s),
    };
    Ok((denom * power).recip())
}

/// Rigorous bound on `∫_T^∞ f(u) du` for `T >= 1`, given `ln T` and
/// `ln(1 + T)`.
///
/// For `u >= T` and `s >= 1`, `u f(u) ln²u <= (1 + T)^{1-s}`, so the tail is at
/// most `(1 + T)^{1-s} / ln T`. When `s > 1` it is also at most
/// `(1 + T)^{1-s} / ((s - 1)(ln²T + π²))`. The smaller of the two is returned.
fn tail_bound_from_logs(s: &Float, ln_t: &Float, ln_1p_t: &Float) -> Float {
    let prec = ln_t.prec().max(s.prec());
    let decay = (Float::with_val(prec, 1u32 - s) * ln_1p_t).exp();
    let log_form = Float::with_val(prec, &decay / ln_t);
    if *s <= 1 {
        return log_form;
    }
    let pi_sq = Float::with_val(prec, Constant::Pi).square();
    let denom = Float::with_val(prec, s - 1u32) * (Float::with_val(prec, ln_t.square_ref()) + pi_sq);
    let power_form = decay / denom;
    if power_form < log_form {
        power_form
    } else {
        log_form
    }
}

/// Rigorous upper bound on `∫_T^∞ du / ((ln²u + π²)(u + 1)^s)`.
///
/// Uses `(1+T)^{1-s} / ((s-1)(ln²T + π²))` when `s > 1` and the
/// `(1+T)^{1-s} / ln T` bound otherwise, whichever is smaller. At `T = 1`
/// and `s = 1` the bound is infinite.
pub fn tail_bound(s: &Float, t: &Float) -> Result<Float> {
    if s.is_nan() || *s < 1 {
        return Err(Error::domain("s", s.to_f64(), "[1, ∞)"));
    }
    if t.is_nan() || *t < 1 {
        return Err(Error::domain("T", t.to_f64(), "[1, ∞)"));
    }
    let prec = t.prec().max(s.prec());
    if t.is_infinite() {
        return Ok(Float::new(prec));
    }
    let ln_t = Float::with_val(prec, t.ln_ref());
    let ln_1p_t = Float::with_val(prec, t.ln_1p_ref());
    Ok(tail_bound_from_logs(s, &ln_t, &ln_1p_t))
}

/// f64 logarithm of the tail bound at `ln T = ln_t`, for choosing cutoffs.
fn ln_tail_bound_f64(s: f64, ln_t: f64) -> f64 {
    if s <= 1.0 {
        return -ln_t.ln();
    }
    let ln_1p_t = ln_t + (-ln_t).exp().ln_1p();
    let decay = (1.0 - s) * ln_1p_t;
    let log_form = decay - ln_t.ln();
    let power_form = decay - (s - 1.0).ln() - (ln_t * ln_t + PI * PI).ln();
    log_form.min(power_form)
}

/// Smallest `y >= 0` (to within bisection) with `ln_bound(e^y) <= target`,
/// where `ln_bound` is decreasing. Working with `y = ln x` keeps enormous
/// cutoffs representable.
fn solve_log_cutoff(ln_bound: impl Fn(f64) -> f64, target: f64) -> f64 {
    let at = |y: f64| ln_bound(y.exp());
    if at(0.0) <= target {
        return 0.0;
    }
    let mut hi = 1.0;
    while at(hi) > target {
        hi *= 2.0;
    }
    let mut lo = hi / 2.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if at(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// exp-sinh abscissa at which the node equals `x = e^y`.
fn exp_sinh_t(y: f64) -> f64 {
    (y / (PI / 2.0)).asinh()
}

struct Plan {
    t_lo: f64,
    t_hi_right: f64,
    t_hi_left: f64,
    tail_bound: Float,
}

/// Chooses the truncation windows for both halves and bounds what they drop.
fn plan(order: &Order, precision: Precision) -> Plan {
    let bits = precision.bits();
    let s = order.to_f64();
    let target = -(precision.digits() as f64) * std::f64::consts::LN_10 + TRUNCATION_SHARE.ln();
    let pi_sq = Float::with_val(bits, Constant::Pi).square();
    let s_float = order.to_float(bits);

    // u >= e^W, i.e. w >= W on the right half.
    let mut y_right = solve_log_cutoff(|big_w| ln_tail_bound_f64(s, big_w), target).max(0.0);
    let right = loop {
        let big_w = Float::with_val(bits, y_right).exp();
        let ln_1p = Float::with_val(bits, -big_w.clone()).exp().ln_1p() + &big_w;
        let bound = tail_bound_from_logs(&s_float, &big_w, &ln_1p);
        if bound.clone().ln().to_f64() <= target + 1.0 {
            break bound;
        }
        y_right += 0.5;
    };

    // u <= e^{-V}: ∫ <= e^{-V} / (V² + π²).
    let y_left = solve_log_cutoff(|v| -v - (v * v + PI * PI).ln(), target);
    let big_v = Float::with_val(bits, y_left).exp();
    let left = Float::with_val(bits, -big_v.clone()).exp() / (big_v.square() + &pi_sq);

    // [0, x_lo] in each half: the integrand is at most 1/π².
    let y_lo = target;
    let near_zero = Float::with_val(bits, y_lo).exp() / &pi_sq * 2u32;

    Plan {
        t_lo: exp_sinh_t(y_lo),
        t_hi_right: exp_sinh_t(y_right).max(0.5),
        t_hi_left: exp_sinh_t(y_left).max(0.5),
        tail_bound: right + left + near_zero,
    }
}

fn not_reached(precision: Precision, estimate: &Float, evaluations: usize) -> Error {
    Error::PrecisionNotReached {
        digits: precision.digits(),
        estimate: estimate.to_f64(),
        evaluations,
    }
}

fn evaluate(order: Order, precision: Precision, config: &QuadratureConfig) -> Result<QuadratureResult> {
    let bits = precision.bits();
    let eps = precision.epsilon();
    let pi_sq = Float::with_val(bits, Constant::Pi).square();
    let plan = plan(&order, precision);
    let tol = Float::with_val(bits, &eps / 4u32);

    let rule = |t_hi: f64| Rule {
        max_level: config.max_level,
        max_evaluations: config.max_evaluations,
        ..Rule::new(bits, plan.t_lo, t_hi)
    };
    let right = de::integrate(&Map::ExpSinh, &rule(plan.t_hi_right), &tol, |x: &Float| {
        log_integrand(x, &order, &pi_sq)
    });
    let left = de::integrate(&Map::ExpSinh, &rule(plan.t_hi_left), &tol, |x: &Float| {
        log_integrand(&Float::with_val(bits, -x), &order, &pi_sq)
    });

    let magnitude = Float::with_val(bits, &right.value + &left.value);
    let error_estimate = Float::with_val(bits, &right.error + &left.error);
    let evaluations = right.evaluations + left.evaluations;
    let total = Float::with_val(bits, &error_estimate + &plan.tail_bound);
    if !right.converged || !left.converged || total > eps {
        return Err(not_reached(precision, &total, evaluations));
    }
    let value = match order {
        Order::Integer(n) if n % 2 == 0 => -magnitude.clone(),
        _ => magnitude.clone(),
    };
    Ok(QuadratureResult {
        order: order.to_float(bits),
        value,
        magnitude,
        error_estimate,
        tail_bound: plan.tail_bound,
        evaluations,
        precision,
    })
}

/// `G_n` from Schröder's integral, certified to `10^-digits` (quadrature
/// estimate plus rigorous truncation bound).
pub fn schroeder_integral(n: u32, precision: Precision) -> Result<QuadratureResult> {
    schroeder_integral_with(n, precision, &QuadratureConfig::default())
}

pub fn schroeder_integral_with(n: u32, precision: Precision, config: &QuadratureConfig) -> Result<QuadratureResult> {
    if n == 0 {
        return Err(Error::TooSmall {
            what: "n",
            min: 1,
            got: 0,
        });
    }
    evaluate(Order::Integer(n), precision, config)
}

/// The same integral at real order `s >= 1`. The magnitude is continuous and
/// strictly decreasing in `s`; below `s = 1` the representation does not hold.
pub fn schroeder_continuous(s: &Float, precision: Precision) -> Result<QuadratureResult> {
    schroeder_continuous_with(s, precision, &QuadratureConfig::default())
}

pub fn schroeder_continuous_with(
    s: &Float,
    precision: Precision,
    config: &QuadratureConfig,
) -> Result<QuadratureResult> {
    let s = Float::with_val(precision.bits().max(s.prec()), s);
    let order = match Order::from_float(&s)? {
        // Route integer-valued s through the real-exponent code path too.
        Order::Integer(_) => Order::Real(s),
        real => real,
    };
    let mut result = evaluate(order, precision, config)?;
    result.value = result.magnitude.clone();
    Ok(result)
}

/// `ln(e^τ - 1)` without cancellation.
fn ln_expm1(tau: &Float) -> Float {
    let prec = tau.prec();
    if *tau < 1 {
        Float::with_val(prec, tau.exp_m1_ref()).ln()
    } else {
        let e = Float::with_val(prec, -tau.clone()).exp();
        (-e).ln_1p() + tau
    }
}

/// `G_n` from the form `(-1)^(n+1) ∫_1^∞ dt / ((ln²(t-1) + π²) t^n)`,
/// integrated in `τ = ln t` over `(0, ∞)` with a single exp-sinh rule. No
/// domain split and no `u = t - 1` substitution are involved, which makes it
/// an independent route to the same number.
pub fn schroeder_integral_t_form(n: u32, precision: Precision) -> Result<QuadratureResult> {
    if n == 0 {
        return Err(Error::TooSmall {
            what: "n",
            min: 1,
            got: 0,
        });
    }
    let config = QuadratureConfig::default();
    let bits = precision.bits();
    let eps = precision.epsilon();
    let pi_sq = Float::with_val(bits, Constant::Pi).square();
    let s = Float::with_val(bits, n);
    let target = -(precision.digits() as f64) * std::f64::consts::LN_10 + TRUNCATION_SHARE.ln();

    // t >= e^Λ corresponds to u = t - 1 >= e^Λ - 1.
    let ln_u = |lambda: f64| lambda + (-(-lambda).exp()).ln_1p();
    let mut y = solve_log_cutoff(|lambda| ln_tail_bound_f64(n as f64, ln_u(lambda.max(1.0))), target).max(0.0);
    let far = loop {
        let lambda = Float::with_val(bits, y).exp().max(&Float::with_val(bits, 1));
        let bound = tail_bound_from_logs(&s, &ln_expm1(&lambda), &lambda);
        if bound.clone().ln().to_f64() <= target + 1.0 {
            break bound;
        }
        y += 0.5;
    };
    let near = Float::with_val(bits, target).exp() / &pi_sq;
    let tail = far + near;

    let rule = Rule {
        max_level: config.max_level,
        max_evaluations: config.max_evaluations,
        ..Rule::new(bits, exp_sinh_t(target), exp_sinh_t(y).max(0.5))
    };
    let tol = Float::with_val(bits, &eps / 2u32);
    let est = de::integrate(&Map::ExpSinh, &rule, &tol, |tau: &Float| {
        let l = ln_expm1(tau);
        let denom = l.square() + &pi_sq;
        let decay = if n == 1 {
            Float::with_val(bits, 1)
        } else {
            Float::with_val(bits, tau * (1i64 - n as i64)).exp()
        };
        decay / denom
    });
    let total = Float::with_val(bits, &est.error + &tail);
    if !est.converged || total > eps {
        return Err(not_reached(precision, &total, est.evaluations));
    }
    let magnitude = est.value;
    let value = if n.is_multiple_of(2) {
        -magnitude.clone()
    } else {
        magnitude.clone()
    };
    Ok(QuadratureResult {
        order: s,
        value,
        magnitude,
        error_estimate: est.error,
        tail_bound: tail,
        evaluations: est.evaluations,
        precision,
    })
}

/// `∫_{e^a}^{e^b} f(u) du` over a finite window given by `a = ln u_lo` and
/// `b = ln u_hi`, with tanh-sinh panels in logarithmic coordinates.
pub fn schroeder_window(s: &Float, ln_lo: &Float, ln_hi: &Float, precision: Precision) -> Result<QuadratureResult> {
    let order = Order::from_float(s)?;
    if ln_hi < ln_lo || ln_lo.is_nan() || ln_hi.is_nan() {
        return Err(Error::domain("window", format!("[{ln_lo}, {ln_hi}]"), "ln_lo <= ln_hi"));
    }
    let bits = precision.bits();
    let eps = precision.epsilon();
    let pi_sq = Float::with_val(bits, Constant::Pi).square();
    let est = de::integrate_panels(
        &Float::with_val(bits, ln_lo),
        &Float::with_val(bits, ln_hi),
        4.0,
        &Float::with_val(bits, &eps / 2u32),
        bits,
        |w: &Float| log_integrand(w, &order, &pi_sq),
    );
    if !est.converged || est.error > eps {
        return Err(not_reached(precision, &est.error, est.evaluations));
    }
    Ok(QuadratureResult {
        order: order.to_float(bits),
        value: est.value.clone(),
        magnitude: est.value,
        error_estimate: est.error,
        tail_bound: Float::new(bits),
        evaluations: est.evaluations,
        precision,
    })
}
