//! Large-`n` behaviour of `|G_n|`.
//!
//! First order: `|G_n| ~ 1/(n ln²n)`. Davis' refinement:
//! `|G_n| ~ Γ(1 + ξ) / (n ln²n + nπ²)` for some `ξ ∈ [0, 1]`. Since `Γ(1 + ξ)`
//! is not monotone on `[0, 1]`, no effective `ξ(n)` is solved for; the
//! comparison is reported through `davis_ratio = |G_n| (n ln²n + nπ²)`.

use rug::float::Constant;
use rug::{Float, Rational};

use crate::exact::{gregory_recurrence, gregory_stirling, GregoryTable};
use crate::{Error, Precision, Result};

/// Above this `n_to`, tables are filled one Stirling row at a time instead
/// of running the full recurrence.
pub const RECURRENCE_LIMIT: u64 = 2000;

#[derive(Debug, Clone)]
pub struct AsymptoticRow {
    pub n: u64,
    /// The exact, signed `G_n`.
    pub exact: Rational,
    pub exact_magnitude: Float,
    /// `1/(n ln²n)`
    pub first_order: Float,
    /// `|G_n| n ln²n`
    pub first_order_ratio: Float,
    /// `n ln²n + nπ²`
    pub davis_denominator: Float,
    /// `|G_n| (n ln²n + nπ²)`
    pub davis_ratio: Float,
}

fn check_n(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::TooSmall {
            what: "n",
            min: 2,
            got: n,
        });
    }
    Ok(())
}

/// `n ln²n`
fn n_ln_sq(n: u64, bits: u32) -> Float {
    let nf = Float::with_val(bits, n);
    let ln = Float::with_val(bits, nf.ln_ref());
    ln.square() * nf
}

/// `1/(n ln²n)`, for `n >= 2`.
pub fn first_order(n: u64, precision: Precision) -> Result<Float> {
    check_n(n)?;
    Ok(n_ln_sq(n, precision.bits()).recip())
}

/// `n ln²n + nπ²`, for `n >= 2`.
pub fn davis_denominator(n: u64, precision: Precision) -> Result<Float> {
    check_n(n)?;
    let bits = precision.bits();
    let pi_sq = Float::with_val(bits, Constant::Pi).square();
    Ok(n_ln_sq(n, bits) + pi_sq * Float::with_val(bits, n))
}

/// `Γ(1 + ξ) / (n ln²n + nπ²)` for `n >= 2` and `ξ ∈ [0, 1]`.
pub fn davis_value(n: u64, xi: &Float, precision: Precision) -> Result<Float> {
    if xi.is_nan() || *xi < 0 || *xi > 1 {
        return Err(Error::domain("xi", xi.to_f64(), "[0, 1]"));
    }
    let denom = davis_denominator(n, precision)?;
    let gamma = Float::with_val(precision.bits(), xi + 1u32).gamma();
    Ok(gamma / denom)
}

/// `|G_n| n ln²n` using the exact `G_n`.
pub fn first_order_ratio(n: u64, precision: Precision) -> Result<Float> {
    Ok(comparison_row(n, &exact_value(n)?, precision)?.first_order_ratio)
}

/// `|G_n| (n ln²n + nπ²)` using the exact `G_n`.
pub fn davis_ratio(n: u64, precision: Precision) -> Result<Float> {
    Ok(comparison_row(n, &exact_value(n)?, precision)?.davis_ratio)
}

fn exact_value(n: u64) -> Result<Rational> {
    check_n(n)?;
    gregory_stirling(n as usize)
}

/// One table row from a known exact `G_n`.
pub fn comparison_row(n: u64, exact: &Rational, precision: Precision) -> Result<AsymptoticRow> {
    check_n(n)?;
    let bits = precision.bits();
    let exact_magnitude = Float::with_val(bits, exact).abs();
    let scale = n_ln_sq(n, bits);
    let davis_denominator = davis_denominator(n, precision)?;
    Ok(AsymptoticRow {
        n,
        first_order: Float::with_val(bits, scale.recip_ref()),
        first_order_ratio: Float::with_val(bits, &exact_magnitude * &scale),
        davis_ratio: Float::with_val(bits, &exact_magnitude * &davis_denominator),
        davis_denominator,
        exact_magnitude,
        exact: exact.clone(),
    })
}

fn row_indices(n_from: u64, n_to: u64, stride: u64) -> Result<impl Iterator<Item = u64>> {
    check_n(n_from)?;
    if n_to < n_from {
        return Err(Error::domain("n_to", n_to, "n_to >= n_from"));
    }
    if stride == 0 {
        return Err(Error::TooSmall {
            what: "stride",
            min: 1,
            got: 0,
        });
    }
    Ok((n_from..=n_to).step_by(stride as usize))
}

/// Rows for `n = n_from, n_from + stride, …, <= n_to`.
///
/// Small dense ranges share one recurrence table; otherwise each row gets
/// its exact value from the Stirling route.
pub fn comparison_table(n_from: u64, n_to: u64, stride: u64, precision: Precision) -> Result<Vec<AsymptoticRow>> {
    let rows = row_indices(n_from, n_to, stride)?.count() as u64;
    if n_to <= RECURRENCE_LIMIT && rows * 20 >= n_to {
        let table = gregory_recurrence(n_to as usize)?;
        return comparison_table_from(&table, n_from, n_to, stride, precision);
    }
    row_indices(n_from, n_to, stride)?
        .map(|n| comparison_row(n, &exact_value(n)?, precision))
        .collect()
}

/// Rows drawn from an existing exact table.
pub fn comparison_table_from(
    table: &GregoryTable,
    n_from: u64,
    n_to: u64,
    stride: u64,
    precision: Precision,
) -> Result<Vec<AsymptoticRow>> {
    if n_to as usize > table.max_index() {
        return Err(Error::domain("n_to", n_to, "within the table"));
    }
    row_indices(n_from, n_to, stride)?
        .map(|n| {
            let g = table.get(n as usize).expect("checked against max_index");
            comparison_row(n, g, precision)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::de::{self, Map, Rule};

    fn prec() -> Precision {
        Precision::new(30).unwrap()
    }

    #[test]
    fn first_order_examples() {
        let p = prec();
        assert!((first_order(10, p).unwrap().to_f64() - 0.018861).abs() < 1e-6);
        assert!((first_order(2, p).unwrap().to_f64() - 1.0407).abs() < 1e-4);
        assert!(first_order(1, p).is_err());
        assert!(first_order(0, p).is_err());
    }

    #[test]
    fn davis_examples() {
        let p = prec();
        let zero = Float::with_val(p.bits(), 0);
        let one = Float::with_val(p.bits(), 1);
        let a = davis_value(10, &zero, p).unwrap();
        let b = davis_value(10, &one, p).unwrap();
        assert_eq!(a, b);
        assert!((a.to_f64() - 0.0065913).abs() < 1e-7);
        assert!((davis_denominator(10, p).unwrap().to_f64() - 151.715).abs() < 1e-3);
        assert!(davis_value(10, &Float::with_val(64, 1.01), p).is_err());
        assert!(davis_value(10, &Float::with_val(64, -0.01), p).is_err());
    }

    #[test]
    fn gamma_against_integral_oracle() {
        // Γ(1 + ξ) = ∫_0^∞ t^ξ e^{-t} dt by exp-sinh, and Γ(3/2) = √π / 2.
        let p = prec();
        let bits = p.bits();
        let denom = davis_denominator(7, p).unwrap();
        let rule = Rule::new(bits, -6.0, 4.5);
        let tol = Float::with_val(bits, 1e-28);
        for xi in [0.25, 0.4616, 0.5, 0.9] {
            let x = Float::with_val(bits, xi);
            let est: de::Estimate<Float> = de::integrate(&Map::ExpSinh, &rule, &tol, |t: &Float| {
                let lt = Float::with_val(bits, t.ln_ref());
                (lt * &x - t).exp()
            });
            assert!(est.converged);
            let got = davis_value(7, &x, p).unwrap() * &denom;
            assert!((got - est.value).abs() < 1e-25, "xi = {xi}");
        }
        let half = Float::with_val(bits, 0.5);
        let sqrt_pi = Float::with_val(bits, Constant::Pi).sqrt() / 2u32;
        let got = davis_value(7, &half, p).unwrap() * &denom;
        assert!((got - sqrt_pi).abs() < 1e-30);
    }

    #[test]
    fn ratio_examples() {
        let p = prec();
        assert!((davis_ratio(2, p).unwrap().to_f64() - 1.725).abs() < 1e-3);
        let r10 = davis_ratio(10, p).unwrap().to_f64();
        assert!((r10 - 1.03).abs() < 5e-3);
        let f10 = first_order_ratio(10, p).unwrap().to_f64();
        assert!((f10 - 0.35978).abs() < 1e-4);
    }

    #[test]
    fn table_matches_exact_magnitudes() {
        let p = prec();
        let rows = comparison_table(2, 8, 1, p).unwrap();
        assert_eq!(rows.len(), 7);
        let exact = gregory_recurrence(8).unwrap();
        for row in &rows {
            let g = Float::with_val(p.bits(), exact.get(row.n as usize).unwrap()).abs();
            assert_eq!(row.exact_magnitude, g);
            assert!(row.first_order_ratio < row.davis_ratio);
        }
        let single = comparison_table(10, 10, 1, p).unwrap();
        assert_eq!(single.len(), 1);
        assert!(single[0].first_order_ratio < 1 && single[0].davis_ratio > 1);
    }

    #[test]
    fn sparse_and_dense_tables_agree() {
        let p = prec();
        let sparse = comparison_table(100, 1000, 100, p).unwrap();
        let table = gregory_recurrence(1000).unwrap();
        let dense = comparison_table_from(&table, 100, 1000, 100, p).unwrap();
        assert_eq!(sparse.len(), 10);
        for (a, b) in sparse.iter().zip(&dense) {
            assert_eq!(a.n, b.n);
            assert_eq!(a.davis_ratio, b.davis_ratio);
        }
        for w in sparse.windows(2) {
            assert!(w[0].first_order_ratio < w[1].first_order_ratio);
        }
    }

    #[test]
    fn table_arguments_are_checked() {
        let p = prec();
        assert!(comparison_table(1, 5, 1, p).is_err());
        assert!(comparison_table(5, 4, 1, p).is_err());
        assert!(comparison_table(2, 5, 0, p).is_err());
        let t = gregory_recurrence(5).unwrap();
        assert!(comparison_table_from(&t, 2, 6, 1, p).is_err());
    }
}
