//! Numerical replay of the keyhole-contour argument.
//!
//! The function `F(z) = 1 / ((1 + z)^n (ln z − πi))`, with `arg z ∈ [0, 2π)`,
//! has a single pole of order `n + 1` at `z = −1`. Integrating it around the
//! keyhole (top edge `r → R`, outer circle counterclockwise, bottom edge
//! `R → r`, inner circle clockwise) gives `2πi |G_n|`, and the two straight
//! edges collapse to `2πi ∫_r^R dx / ((1 + x)^n (ln²x + π²))`.
//!
//! Edges are evaluated with the one-sided limits of `ln z` on the cut, so no
//! finite offset from the real axis is needed.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::complex::ComplexReal;
use crate::de::{self, Estimate};
use crate::exact::gregory_stirling;
use crate::{Error, Precision, Result};

/// Minimum distance between a circle and the pole at `z = −1`.
pub const POLE_CLEARANCE: f64 = 0.1;

/// Which side of the positive real axis an edge runs along.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `arg z → 0⁺`, where `ln z → ln x`.
    Above,
    /// `arg z → 2π⁻`, where `ln z → ln x + 2πi`.
    Below,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    /// Radius `R > 1`, traversed counterclockwise.
    Outer,
    /// Radius `r < 1`, traversed clockwise.
    Inner,
}

#[derive(Debug, Clone)]
pub struct ContourReport {
    pub n: u32,
    pub inner_radius: Float,
    pub outer_radius: Float,
    pub leg_top: ComplexReal,
    pub leg_outer_arc: ComplexReal,
    pub leg_bottom: ComplexReal,
    pub leg_inner_arc: ComplexReal,
    pub total: ComplexReal,
    /// `2πi |G_n|` from the exact value.
    pub residue_target: ComplexReal,
    /// `|total − residue_target|`
    pub deviation: Float,
    /// Sum of the level-difference estimates of the four legs.
    pub quadrature_error: Float,
    pub evaluations: usize,
}

impl ContourReport {
    /// `leg_top + leg_bottom`, the part that survives as `r → 0`, `R → ∞`.
    pub fn edge_sum(&self) -> ComplexReal {
        &self.leg_top + &self.leg_bottom
    }

    /// `|edge_sum − residue_target|`, which shrinks with the arcs.
    pub fn edge_deviation(&self) -> Float {
        (&self.edge_sum() - &self.residue_target).abs()
    }
}

#[derive(Debug, Clone)]
pub struct ArcSample {
    pub radius: Float,
    pub magnitude: Float,
    /// `1/(R^{n-1} ln R)` for outer arcs, `r/|ln r|` for inner arcs.
    pub bound_shape: Float,
    /// `magnitude / bound_shape`
    pub ratio: Float,
}

#[derive(Debug, Clone)]
pub struct ArcProbe {
    pub n: u32,
    pub kind: ArcKind,
    pub samples: Vec<ArcSample>,
    /// Smallest constant `c` with `magnitude <= c * bound_shape` at every
    /// sample.
    pub constant: Float,
    /// Largest ratio over smallest ratio; near 1 when the decay shape fits.
    pub spread: Float,
}

fn check_order(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::TooSmall {
            what: "n",
            min: 1,
            got: 0,
        });
    }
    Ok(())
}

/// `F(z) = 1 / ((1 + z)^n (ln z − πi))` with `arg z ∈ [0, 2π)`.
///
/// A point on the positive real axis is taken as the limit from above.
pub fn contour_integrand(z: &ComplexReal, n: u32) -> Result<ComplexReal> {
    check_order(n)?;
    if z.is_zero() {
        return Err(Error::domain("z", "0", "z ≠ 0"));
    }
    let prec = z.prec();
    let one_plus = ComplexReal::new(Float::with_val(prec, &z.re + 1u32), z.im.clone());
    if one_plus.is_zero() {
        return Err(Error::domain("z", "-1", "z ≠ -1 (pole)"));
    }
    let mut log = z.ln_cut_positive();
    log.im -= Float::with_val(prec, Constant::Pi);
    Ok((&one_plus.powu(n) * &log).recip())
}

/// One-sided limit of [`contour_integrand`] at `x > 0`.
pub fn edge_integrand(x: &Float, n: u32, side: Side) -> Result<ComplexReal> {
    check_order(n)?;
    if x.is_nan() || *x <= 0 {
        return Err(Error::domain("x", x.to_f64(), "(0, ∞)"));
    }
    let prec = x.prec();
    let pi = Float::with_val(prec, Constant::Pi);
    let im = match side {
        Side::Above => -pi,
        Side::Below => pi,
    };
    let log = ComplexReal::new(Float::with_val(prec, x.ln_ref()), im);
    let power = Float::with_val(prec, x + 1u32).pow(n);
    Ok(log.scale(&power).recip())
}

/// Edge integral from `r` to `R` along `side`, in `w = ln x`.
fn edge(n: u32, ln_r: &Float, ln_big_r: &Float, side: Side, tol: &Float, bits: u32) -> Estimate<ComplexReal> {
    de::integrate_panels(ln_r, ln_big_r, 4.0, tol, bits, |w: &Float| {
        let x = Float::with_val(bits, w.exp_ref());
        edge_integrand(&x, n, side).expect("x > 0").scale(&x)
    })
}

fn check_clearance(rho: &Float) -> Result<()> {
    let gap = Float::with_val(rho.prec(), rho - 1u32).abs();
    if gap < POLE_CLEARANCE {
        return Err(Error::PoleTooClose {
            radius: rho.to_f64(),
            clearance: POLE_CLEARANCE,
        });
    }
    Ok(())
}

/// `∫ F(z) dz` over the full circle `|z| = ρ`, counterclockwise from
/// `θ = 0` to `2π`. On the circle `ln z − πi = ln ρ + i(θ − π)`.
fn circle(n: u32, rho: &Float, tol: &Float, bits: u32) -> Estimate<ComplexReal> {
    let ln_rho = Float::with_val(bits, rho.ln_ref());
    let pi = Float::with_val(bits, Constant::Pi);
    let two_pi = Float::with_val(bits, &pi * 2u32);
    let zero = Float::new(bits);
    de::integrate_panels(&zero, &two_pi, 3.2, tol, bits, |theta: &Float| {
        let z = ComplexReal::from_polar(rho, theta);
        let one_plus = ComplexReal::new(Float::with_val(bits, &z.re + 1u32), z.im.clone());
        let log = ComplexReal::new(ln_rho.clone(), Float::with_val(bits, theta - &pi));
        // dz = i z dθ
        &z.mul_i() / &(&one_plus.powu(n) * &log)
    })
}

/// One arc of the keyhole, oriented as in the contour.
fn arc(n: u32, rho: &Float, kind: ArcKind, tol: &Float, bits: u32) -> Estimate<ComplexReal> {
    let mut est = circle(n, rho, tol, bits);
    if kind == ArcKind::Inner {
        est.value = -est.value;
    }
    est
}

fn not_reached(precision: Precision, estimate: &Float, evaluations: usize) -> Error {
    Error::PrecisionNotReached {
        digits: precision.digits(),
        estimate: estimate.to_f64(),
        evaluations,
    }
}

/// Integrates `F` around the keyhole with radii `r < 1 < R` and compares
/// the total with `2πi |G_n|`.
pub fn contour_integral(n: u32, r: &Float, big_r: &Float, precision: Precision) -> Result<ContourReport> {
    check_order(n)?;
    if r.is_nan() || *r <= 0 || *r >= 1 {
        return Err(Error::domain("r", r.to_f64(), "(0, 1)"));
    }
    if big_r.is_nan() || big_r.is_infinite() || *big_r <= 1 {
        return Err(Error::domain("R", big_r.to_f64(), "(1, ∞)"));
    }
    check_clearance(r)?;
    check_clearance(big_r)?;

    let bits = precision.bits();
    let eps = precision.epsilon();
    let tol = Float::with_val(bits, &eps / 8u32);
    let r = Float::with_val(bits, r);
    let big_r = Float::with_val(bits, big_r);
    let ln_r = Float::with_val(bits, r.ln_ref());
    let ln_big_r = Float::with_val(bits, big_r.ln_ref());

    let top = edge(n, &ln_r, &ln_big_r, Side::Above, &tol, bits);
    let mut bottom = edge(n, &ln_r, &ln_big_r, Side::Below, &tol, bits);
    bottom.value = -bottom.value;
    let outer = arc(n, &big_r, ArcKind::Outer, &tol, bits);
    let inner = arc(n, &r, ArcKind::Inner, &tol, bits);

    let legs = [&top, &outer, &bottom, &inner];
    let evaluations = legs.iter().map(|e| e.evaluations).sum();
    let mut quadrature_error = Float::new(bits);
    for leg in legs {
        quadrature_error += &leg.error;
    }
    if legs.iter().any(|e| !e.converged) || quadrature_error > eps {
        return Err(not_reached(precision, &quadrature_error, evaluations));
    }

    let mut total = ComplexReal::zero(bits);
    for leg in legs {
        total += &leg.value;
    }
    let g = gregory_stirling(n as usize)?;
    let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
    let residue_target = ComplexReal::new(Float::new(bits), two_pi * Float::with_val(bits, g.abs()));
    let deviation = (&total - &residue_target).abs();

    Ok(ContourReport {
        n,
        inner_radius: r,
        outer_radius: big_r,
        leg_top: top.value,
        leg_outer_arc: outer.value,
        leg_bottom: bottom.value,
        leg_inner_arc: inner.value,
        total,
        residue_target,
        deviation,
        quadrature_error,
        evaluations,
    })
}

/// A single keyhole arc, oriented as in [`contour_integral`].
pub fn arc_integral(n: u32, radius: &Float, kind: ArcKind, precision: Precision) -> Result<ComplexReal> {
    check_order(n)?;
    check_arc_radius(radius, kind)?;
    let bits = precision.bits();
    let eps = precision.epsilon();
    let tol = Float::with_val(bits, &eps / 2u32);
    let est = arc(n, &Float::with_val(bits, radius), kind, &tol, bits);
    if !est.converged {
        return Err(not_reached(precision, &est.error, est.evaluations));
    }
    Ok(est.value)
}

fn check_arc_radius(radius: &Float, kind: ArcKind) -> Result<()> {
    match kind {
        ArcKind::Outer if radius.is_nan() || radius.is_infinite() || *radius <= 1 => {
            Err(Error::domain("R", radius.to_f64(), "(1, ∞)"))
        }
        ArcKind::Inner if radius.is_nan() || *radius <= 0 || *radius >= 1 => {
            Err(Error::domain("r", radius.to_f64(), "(0, 1)"))
        }
        _ => check_clearance(radius),
    }
}

/// Decay shape of the arc bound: `1/(R^{n-1} ln R)` outside,
/// `r/|ln r|` inside.
pub fn arc_bound_shape(n: u32, radius: &Float, kind: ArcKind) -> Float {
    let prec = radius.prec();
    let ln = Float::with_val(prec, radius.ln_ref()).abs();
    match kind {
        ArcKind::Outer => (Float::with_val(prec, radius).pow(n - 1) * ln).recip(),
        ArcKind::Inner => Float::with_val(prec, radius / &ln),
    }
}

/// Measures `|arc|` at each radius and fits the constant of the bound
/// shape. Radii may be given in any order; samples keep that order.
pub fn arc_decay_probe(n: u32, kind: ArcKind, radii: &[Float], precision: Precision) -> Result<ArcProbe> {
    check_order(n)?;
    if radii.is_empty() {
        return Err(Error::domain("radii", "[]", "non-empty list"));
    }
    let bits = precision.bits();
    let mut samples = Vec::with_capacity(radii.len());
    for radius in radii {
        let radius = Float::with_val(bits, radius);
        let magnitude = arc_integral(n, &radius, kind, precision)?.abs();
        let bound_shape = arc_bound_shape(n, &radius, kind);
        let ratio = Float::with_val(bits, &magnitude / &bound_shape);
        samples.push(ArcSample {
            radius,
            magnitude,
            bound_shape,
            ratio,
        });
    }
    let mut max = samples[0].ratio.clone();
    let mut min = samples[0].ratio.clone();
    for s in &samples[1..] {
        if s.ratio > max {
            max = s.ratio.clone();
        }
        if s.ratio < min {
            min = s.ratio.clone();
        }
    }
    let spread = Float::with_val(bits, &max / &min);
    Ok(ArcProbe {
        n,
        kind,
        samples,
        constant: max,
        spread,
    })
}
