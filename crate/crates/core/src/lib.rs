//! Gregory coefficients, also known as Bernoulli numbers of the second kind.
//!
//! The coefficients `G_n` are generated by `u / ln(1 + u) = 1 + sum G_n u^n`.
//! This crate evaluates them several independent ways and cross-checks the
//! results:
//!
//! * [`exact`]: exact rationals from the generating-function recurrence and
//!   from integrating the falling factorial term by term, plus Cauchy numbers
//!   of the second kind.
//! * [`quadrature`]: Schröder's integral
//!   `G_n = (-1)^(n+1) ∫_0^∞ du / ((ln²u + π²)(u + 1)^n)` at arbitrary
//!   precision, including non-integer order.
//! * [`contour`]: a numerical replay of the keyhole-contour residue argument
//!   that produces the integral above.
//! * [`asymptotics`]: the first-order law `|G_n| ~ 1/(n ln²n)` and Davis'
//!   refinement, compared against exact values.
//!
//! Exact values use GMP integers and rationals; real values use MPFR floats
//! at an explicit working precision (see [`Precision`]).

pub mod asymptotics;
pub mod complex;
pub mod contour;
mod de;
mod error;
pub mod exact;
mod precision;
pub mod quadrature;

pub use error::{Error, Result};
pub use precision::{BigReal, Precision, GUARD_DIGITS};
