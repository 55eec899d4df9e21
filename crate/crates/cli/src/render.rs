use rug::{Float, Integer, Rational};
use serde::Serialize;

/// `p/q`, reduced, sign on the numerator, denominator always written.
pub fn fraction(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Fixed-point decimal with `places` digits after the point, rounded half to
/// even from the exact value.
pub fn fixed_rational(q: &Rational, places: usize) -> String {
    let scale = Integer::from(Integer::u_pow_u(10, places as u32));
    let scaled = Rational::from(q * &scale);
    let negative = scaled < 0;
    let scaled = scaled.abs();
    let (frac, mut whole) = scaled.fract_floor(Integer::new());
    let half = Rational::from((1, 2));
    if frac > half || (frac == half && whole.is_odd()) {
        whole += 1;
    }
    let digits = whole.to_string();
    let digits = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let sign = if negative && whole != 0 { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// [`fixed_rational`] applied to the exact binary value of `x`.
pub fn fixed(x: &Float, places: usize) -> String {
    match x.to_rational() {
        Some(q) => fixed_rational(&q, places),
        None => x.to_string(),
    }
}

/// Short scientific form for error estimates and bounds.
pub fn sci(x: &Float) -> String {
    if x.is_zero() {
        return "0".into();
    }
    format!("{:.3e}", x.to_f64())
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
#[allow(dead_code)]
pub enum Method {
    Recurrence,
    Stirling,
    Schroeder,
    Continuous,
    Contour,
    FirstOrder,
    Davis,
}

/// One output row. Absent fields are left out of JSON.
#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    #[serde(rename = "n")]
    pub n_or_s: serde_json::Number,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<String>,
}

impl OutputRecord {
    pub fn integer(n: u64) -> Self {
        OutputRecord {
            n_or_s: n.into(),
            method: None,
            value: None,
            exact: None,
            error: None,
            tail_bound: None,
        }
    }

    pub fn real(s: f64) -> Self {
        OutputRecord {
            n_or_s: serde_json::Number::from_f64(s).unwrap_or_else(|| 0.into()),
            ..OutputRecord::integer(0)
        }
    }
}

/// Escapes a CSV field if it needs quoting.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
