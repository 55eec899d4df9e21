use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::{Error, Result};

/// Arbitrary-precision real. The MPFR precision of each value is the working
/// precision of the computation that produced it.
pub type BigReal = Float;

/// Decimal digits carried beyond the requested accuracy.
pub const GUARD_DIGITS: u32 = 10;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Requested accuracy in decimal digits, plus the derived binary working
/// precision (requested digits + [`GUARD_DIGITS`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const MIN_DIGITS: u32 = 15;
    pub const MAX_DIGITS: u32 = 100_000;

    pub fn new(digits: u32) -> Result<Self> {
        if !(Self::MIN_DIGITS..=Self::MAX_DIGITS).contains(&digits) {
            return Err(Error::domain("digits", digits, "[15, 100000]"));
        }
        Ok(Precision { digits })
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    /// Binary precision for intermediate arithmetic.
    pub fn bits(self) -> u32 {
        ((self.digits + GUARD_DIGITS) as f64 * LOG2_10).ceil() as u32 + 8
    }

    /// `10^-digits`, the absolute accuracy target.
    pub fn epsilon(self) -> Float {
        let ten = Float::with_val(self.bits(), 10);
        ten.pow(-(self.digits as i32))
    }

    pub fn pi(self) -> Float {
        Float::with_val(self.bits(), Constant::Pi)
    }

    pub fn float<T>(self, value: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        let mut f = Float::new(self.bits());
        rug::Assign::assign(&mut f, value);
        f
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision { digits: 30 }
    }
}
