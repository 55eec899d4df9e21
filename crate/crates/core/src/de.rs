//! Double-exponential (tanh-sinh / exp-sinh) trapezoidal quadrature.
//!
//! The trapezoid rule is applied in the transformed variable `t` on a fixed
//! window `[t_lo, t_hi]`; callers pick the window from analytic truncation
//! bounds. The step is halved level by level, reusing earlier nodes, and the
//! difference between successive levels serves as the error estimate.

use std::f64::consts::FRAC_PI_2;

use rug::float::Constant;
use rug::Float;

use crate::complex::ComplexReal;

/// Values that can be accumulated by the trapezoid sums.
pub(crate) trait Summand: Clone {
    fn zero(prec: u32) -> Self;
    fn add_scaled(&mut self, weight: &Float, value: &Self);
    fn scaled(&self, factor: &Float) -> Self;
    fn distance(&self, other: &Self) -> Float;
}

impl Summand for Float {
    fn zero(prec: u32) -> Self {
        Float::new(prec)
    }

    fn add_scaled(&mut self, weight: &Float, value: &Self) {
        *self += weight * value;
    }

    fn scaled(&self, factor: &Float) -> Self {
        self.clone() * factor
    }

    fn distance(&self, other: &Self) -> Float {
        (self.clone() - other).abs()
    }
}

impl Summand for ComplexReal {
    fn zero(prec: u32) -> Self {
        ComplexReal::zero(prec)
    }

    fn add_scaled(&mut self, weight: &Float, value: &Self) {
        self.re += weight * &value.re;
        self.im += weight * &value.im;
    }

    fn scaled(&self, factor: &Float) -> Self {
        self.scale(factor)
    }

    fn distance(&self, other: &Self) -> Float {
        (self - other).abs()
    }
}

/// Change of variables mapping the real `t` line onto the integration range.
#[derive(Debug, Clone)]
pub(crate) enum Map {
    /// `x = exp(π/2 sinh t)`, onto `(0, ∞)`.
    ExpSinh,
    /// `x = (a+b)/2 + (b-a)/2 tanh(π/2 sinh t)`, onto `(a, b)`.
    TanhSinh { a: Float, b: Float },
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Rule {
    pub prec: u32,
    pub t_lo: f64,
    pub t_hi: f64,
    pub min_level: u32,
    pub max_level: u32,
    pub max_evaluations: usize,
}

impl Rule {
    pub fn new(prec: u32, t_lo: f64, t_hi: f64) -> Self {
        Rule {
            prec,
            t_lo,
            t_hi,
            min_level: 3,
            max_level: 12,
            max_evaluations: 400_000,
        }
    }

    /// Window half-width for tanh-sinh so that the dropped end weights are
    /// below `tol / (width * scale)`.
    pub fn tanh_sinh_half_width(tol: &Float, width: f64, scale: f64) -> f64 {
        let log_tol = tol.clone().ln().to_f64();
        // weight ~ width * π cosh t * exp(-π sinh t)
        let s = (-log_tol + (width.max(1.0) * scale.max(1.0) * 16.0).ln()).max(1.0);
        (s / FRAC_PI_2 / 2.0).asinh() + 0.5
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Estimate<V> {
    pub value: V,
    pub error: Float,
    pub evaluations: usize,
    pub converged: bool,
}

const H0: f64 = 0.5;

fn node(map: &Map, t: f64, prec: u32, half_pi: &Float) -> Option<(Float, Float)> {
    let t = Float::with_val(prec, t);
    let (sinh, cosh) = t.sinh_cosh(Float::new(prec));
    let s = sinh * half_pi;
    match map {
        Map::ExpSinh => {
            let x = s.exp();
            let w = Float::with_val(prec, &x * half_pi) * cosh;
            Some((x, w))
        }
        Map::TanhSinh { a, b } => {
            let width = Float::with_val(prec, b - a);
            let cosh_s = Float::with_val(prec, s.cosh_ref());
            let w = Float::with_val(prec, &width * half_pi) / 2u32 * cosh / cosh_s.square();
            // Offset from the nearer endpoint, width / (1 + exp(2|s|)), keeps
            // full relative accuracy close to the ends.
            let e = Float::with_val(prec, -2 * s.clone().abs()).exp();
            let off = width * &e / (1u32 + e);
            let x = if s.is_sign_negative() {
                Float::with_val(prec, a + off)
            } else {
                Float::with_val(prec, b - off)
            };
            if x <= *a || x >= *b || w.is_zero() {
                return None;
            }
            Some((x, w))
        }
    }
}

/// Trapezoid sums with step halving until two successive levels agree to
/// `tol`, or the level / evaluation budget is exhausted.
pub(crate) fn integrate<V, F>(map: &Map, rule: &Rule, tol: &Float, mut f: F) -> Estimate<V>
where
    V: Summand,
    F: FnMut(&Float) -> V,
{
    let prec = rule.prec;
    let half_pi = Float::with_val(prec, Constant::Pi) / 2u32;
    let mut sum = V::zero(prec);
    let mut evaluations = 0usize;
    let mut previous: Option<V> = None;
    let mut error = Float::with_val(prec, f64::INFINITY);

    for level in 0..=rule.max_level {
        let h = H0 / f64::powi(2.0, level as i32);
        let j_lo = (rule.t_lo / h).ceil() as i64;
        let j_hi = (rule.t_hi / h).floor() as i64;
        for j in j_lo..=j_hi {
            if level > 0 && j % 2 == 0 {
                continue;
            }
            if let Some((x, w)) = node(map, j as f64 * h, prec, &half_pi) {
                let y = f(&x);
                sum.add_scaled(&w, &y);
                evaluations += 1;
            }
        }
        let current = sum.scaled(&Float::with_val(prec, h));
        if let Some(prev) = &previous {
            error = current.distance(prev);
            if level >= rule.min_level && error <= *tol {
                return Estimate {
                    value: current,
                    error,
                    evaluations,
                    converged: true,
                };
            }
        }
        previous = Some(current);
        if evaluations >= rule.max_evaluations {
            break;
        }
    }
    Estimate {
        value: previous.expect("at least one level"),
        error,
        evaluations,
        converged: false,
    }
}

/// tanh-sinh over `[lo, hi]` split into equal panels no wider than
/// `max_width`. `tol` is the total budget, shared evenly by the panels. The
/// integrand is assumed bounded by about 1 in magnitude.
pub(crate) fn integrate_panels<V, F>(
    lo: &Float,
    hi: &Float,
    max_width: f64,
    tol: &Float,
    prec: u32,
    mut f: F,
) -> Estimate<V>
where
    V: Summand,
    F: FnMut(&Float) -> V,
{
    let span = Float::with_val(prec, hi - lo);
    let panels = (span.to_f64() / max_width).ceil().max(1.0) as u32;
    let width = Float::with_val(prec, &span / panels);
    let panel_tol = Float::with_val(prec, tol / panels);
    let t = Rule::tanh_sinh_half_width(&panel_tol, width.to_f64(), 1.0);
    let rule = Rule::new(prec, -t, t);

    let mut total = Estimate {
        value: V::zero(prec),
        error: Float::new(prec),
        evaluations: 0,
        converged: true,
    };
    if span.is_zero() {
        return total;
    }
    let one = Float::with_val(prec, 1);
    for k in 0..panels {
        let a = Float::with_val(prec, &width * k) + lo;
        let b = if k + 1 == panels {
            Float::with_val(prec, hi)
        } else {
            Float::with_val(prec, &width * (k + 1)) + lo
        };
        let est = integrate(&Map::TanhSinh { a, b }, &rule, &panel_tol, &mut f);
        total.value.add_scaled(&one, &est.value);
        total.error += est.error;
        total.evaluations += est.evaluations;
        total.converged &= est.converged;
    }
    total
}
