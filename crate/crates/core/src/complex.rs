//! Minimal complex arithmetic over MPFR floats.
//!
//! Only what the contour computations need. The logarithm uses the branch
//! `arg z ∈ [0, 2π)`, i.e. the cut runs along the positive real axis.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::{Assign, Float};

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexReal {
    pub re: Float,
    pub im: Float,
}

impl ComplexReal {
    pub fn new(re: Float, im: Float) -> Self {
        ComplexReal { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        ComplexReal::new(Float::new(prec), Float::new(prec))
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        ComplexReal { re, im }
    }

    pub fn i(prec: u32) -> Self {
        ComplexReal::new(Float::new(prec), Float::with_val(prec, 1))
    }

    /// `rho (cos theta + i sin theta)`
    pub fn from_polar(rho: &Float, theta: &Float) -> Self {
        let (sin, cos) = theta.clone().sin_cos(Float::new(theta.prec()));
        ComplexReal::new(cos * rho, sin * rho)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    pub fn norm_sqr(&self) -> Float {
        let mut n = Float::with_val(self.prec(), self.re.square_ref());
        n += Float::with_val(self.prec(), self.im.square_ref());
        n
    }

    pub fn conj(&self) -> Self {
        ComplexReal::new(self.re.clone(), -self.im.clone())
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        ComplexReal::new(-self.im.clone(), self.re.clone())
    }

    pub fn scale(&self, factor: &Float) -> Self {
        ComplexReal::new(self.re.clone() * factor, self.im.clone() * factor)
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        ComplexReal::new(self.re.clone() / &n, -self.im.clone() / &n)
    }

    /// `z^n` by repeated multiplication.
    pub fn powu(&self, n: u32) -> Self {
        let mut acc = ComplexReal::from_real(Float::with_val(self.prec(), 1));
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Argument in `[0, 2π)`. Points on the positive real axis get 0, the
    /// limit from above the cut.
    pub fn arg_cut_positive(&self) -> Float {
        let prec = self.prec();
        let mut a = Float::with_val(prec, self.im.atan2_ref(&self.re));
        if a.is_sign_negative() && !a.is_zero() {
            a += Float::with_val(prec, Constant::Pi) * 2u32;
        } else if a.is_zero() {
            a.assign(0);
        }
        a
    }

    /// `ln|z| + i arg z` with `arg z ∈ [0, 2π)`.
    pub fn ln_cut_positive(&self) -> Self {
        ComplexReal::new(self.abs().ln(), self.arg_cut_positive())
    }
}

impl fmt::Display for ComplexReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_sign_negative() { '-' } else { '+' };
        match f.precision() {
            Some(p) => write!(f, "{:.*e} {} {:.*e}i", p, self.re, sign, p, self.im.clone().abs()),
            None => write!(f, "{} {} {}i", self.re, sign, self.im.clone().abs()),
        }
    }
}

impl Add for &ComplexReal {
    type Output = ComplexReal;
    fn add(self, rhs: &ComplexReal) -> ComplexReal {
        ComplexReal::new(self.re.clone() + &rhs.re, self.im.clone() + &rhs.im)
    }
}

impl Add for ComplexReal {
    type Output = ComplexReal;
    fn add(self, rhs: ComplexReal) -> ComplexReal {
        ComplexReal::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign<&ComplexReal> for ComplexReal {
    fn add_assign(&mut self, rhs: &ComplexReal) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for &ComplexReal {
    type Output = ComplexReal;
    fn sub(self, rhs: &ComplexReal) -> ComplexReal {
        ComplexReal::new(self.re.clone() - &rhs.re, self.im.clone() - &rhs.im)
    }
}

impl Sub for ComplexReal {
    type Output = ComplexReal;
    fn sub(self, rhs: ComplexReal) -> ComplexReal {
        ComplexReal::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for ComplexReal {
    type Output = ComplexReal;
    fn neg(self) -> ComplexReal {
        ComplexReal::new(-self.re, -self.im)
    }
}

impl Mul for &ComplexReal {
    type Output = ComplexReal;
    fn mul(self, rhs: &ComplexReal) -> ComplexReal {
        let prec = self.prec().max(rhs.prec());
        let mut re = Float::with_val(prec, &self.re * &rhs.re);
        re -= &self.im * &rhs.im;
        let mut im = Float::with_val(prec, &self.re * &rhs.im);
        im += &self.im * &rhs.re;
        ComplexReal::new(re, im)
    }
}

impl Mul for ComplexReal {
    type Output = ComplexReal;
    fn mul(self, rhs: ComplexReal) -> ComplexReal {
        &self * &rhs
    }
}

impl Div for &ComplexReal {
    type Output = ComplexReal;
    fn div(self, rhs: &ComplexReal) -> ComplexReal {
        let n = rhs.norm_sqr();
        let num = self * &rhs.conj();
        ComplexReal::new(num.re / &n, num.im / &n)
    }
}

impl Div for ComplexReal {
    type Output = ComplexReal;
    fn div(self, rhs: ComplexReal) -> ComplexReal {
        &self / &rhs
    }
}
