//! Exact rational values of Gregory coefficients and Cauchy numbers.
//!
//! Two independent routes produce `G_n`:
//!
//! * [`gregory_recurrence`] expands the generating function
//!   `u / ln(1 + u) = 1 + sum G_n u^n`. Multiplying by the series
//!   `ln(1 + u) / u = sum (-1)^m u^m / (m + 1)` gives, with `G_0 = 1`,
//!   `sum_{k=0}^{n} G_k (-1)^(n-k) / (n-k+1) = 0` for every `n >= 1`.
//! * [`gregory_stirling`] integrates the falling factorial
//!   `x (x-1) ... (x-n+1) = sum s(n,k) x^k` over `[0, 1]` and divides by `n!`.
//!
//! Cauchy numbers of the second kind integrate the rising factorial instead and
//! satisfy `n C2(n-1) - C2(n) = n! |G_n|` ([`check_relation`]).

use std::sync::{Arc, OnceLock, RwLock};

use rug::{Complete, Integer, Rational};

use crate::{Error, Result};

/// Exact reduced fraction. `rug::Rational` is kept canonical (reduced, positive
/// denominator) after every operation.
pub type BigRational = Rational;

/// Signed Stirling numbers of the first kind `s(n, k)` for `1 <= k <= n <= N`.
#[derive(Debug, Clone, Default)]
pub struct StirlingTriangle {
    // rows[n - 1][k - 1] = s(n, k)
    rows: Vec<Arc<[Integer]>>,
}

impl StirlingTriangle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_rows(n_max: usize) -> Self {
        let mut t = Self::new();
        t.extend_to(n_max);
        t
    }

    /// Largest `n` whose row is available.
    pub fn max_row(&self) -> usize {
        self.rows.len()
    }

    /// Appends rows via `s(n+1, k) = s(n, k-1) - n s(n, k)`.
    pub fn extend_to(&mut self, n_max: usize) {
        if self.rows.is_empty() && n_max >= 1 {
            self.rows.push(Arc::from(vec![Integer::from(1)]));
        }
        while self.rows.len() < n_max {
            let n = self.rows.len();
            let prev = &self.rows[n - 1];
            let mut next = Vec::with_capacity(n + 1);
            for k in 1..=n + 1 {
                let left = if k >= 2 { prev[k - 2].clone() } else { Integer::new() };
                let here = if k <= n {
                    (&prev[k - 1] * n as u64).complete()
                } else {
                    Integer::new()
                };
                next.push(left - here);
            }
            self.rows.push(Arc::from(next));
        }
    }

    /// `s(n, 1..=n)`, or `None` when `n` is 0 or beyond [`Self::max_row`].
    pub fn row(&self, n: usize) -> Option<&[Integer]> {
        n.checked_sub(1).and_then(|i| self.rows.get(i)).map(|r| &r[..])
    }

    pub fn get(&self, n: usize, k: usize) -> Option<&Integer> {
        if k == 0 {
            return None;
        }
        self.row(n).and_then(|r| r.get(k - 1))
    }

    fn shared_row(&self, n: usize) -> Option<Arc<[Integer]>> {
        n.checked_sub(1).and_then(|i| self.rows.get(i)).cloned()
    }
}

fn stirling_cache() -> &'static RwLock<StirlingTriangle> {
    static CACHE: OnceLock<RwLock<StirlingTriangle>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(StirlingTriangle::new()))
}

/// Rows up to this index come from the memoized triangle; larger rows are
/// built on demand from a product tree and not cached.
pub const MEMO_ROW_LIMIT: usize = 1024;

/// Signed row `s(n, 1..=n)`.
fn stirling_row(n: usize) -> Arc<[Integer]> {
    if n <= MEMO_ROW_LIMIT {
        return memo_stirling_row(n);
    }
    let mut c = rising_factorial_coefficients(n);
    c.remove(0);
    for (i, v) in c.iter_mut().enumerate() {
        // s(n, k) = (-1)^(n-k) |s(n, k)|, k = i + 1
        if (n - i - 1) % 2 == 1 {
            *v = -std::mem::take(v);
        }
    }
    Arc::from(c)
}

/// Row `n` of the process-wide memoized triangle, growing it when needed.
fn memo_stirling_row(n: usize) -> Arc<[Integer]> {
    debug_assert!(n >= 1);
    if let Some(row) = stirling_cache().read().expect("stirling cache poisoned").shared_row(n) {
        return row;
    }
    let mut cache = stirling_cache().write().expect("stirling cache poisoned");
    cache.extend_to(n);
    cache.shared_row(n).expect("row was just computed")
}

/// Coefficients `c_0..c_n` of `x (x+1) ... (x+n-1)`, i.e. unsigned Stirling
/// numbers `|s(n, k)|`, by a balanced product tree. Polynomial products use
/// Kronecker substitution so that the heavy lifting is a single GMP multiply.
fn rising_factorial_coefficients(n: usize) -> Vec<Integer> {
    fn build(lo: u64, hi: u64) -> Vec<Integer> {
        if hi - lo <= 16 {
            let mut poly = vec![Integer::from(1)];
            for shift in lo..hi {
                poly.push(Integer::new());
                for i in (0..poly.len()).rev() {
                    let lower = if i > 0 { poly[i - 1].clone() } else { Integer::new() };
                    poly[i] *= shift;
                    poly[i] += lower;
                }
            }
            return poly;
        }
        let mid = lo + (hi - lo) / 2;
        kronecker_mul(&build(lo, mid), &build(mid, hi))
    }
    build(0, n as u64)
}

/// Product of two polynomials with nonnegative coefficients.
fn kronecker_mul(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    use rug::integer::Order;

    let max_bits = |p: &[Integer]| p.iter().map(|c| c.significant_bits()).max().unwrap_or(0);
    let terms = a.len().min(b.len()) as u64;
    let slot_bits = max_bits(a) as u64 + max_bits(b) as u64 + (64 - terms.leading_zeros()) as u64 + 1;
    let slot = slot_bits.div_ceil(64) as usize;

    let pack = |p: &[Integer]| {
        let mut limbs = vec![0u64; p.len() * slot];
        for (i, c) in p.iter().enumerate() {
            let digits = c.to_digits::<u64>(Order::Lsf);
            limbs[i * slot..i * slot + digits.len()].copy_from_slice(&digits);
        }
        Integer::from_digits(&limbs, Order::Lsf)
    };
    let product = pack(a) * pack(b);
    let mut limbs = product.to_digits::<u64>(Order::Lsf);
    let len = a.len() + b.len() - 1;
    limbs.resize(len * slot, 0);
    limbs
        .chunks(slot)
        .map(|chunk| Integer::from_digits(chunk, Order::Lsf))
        .collect()
}

/// Signed Stirling number of the first kind: the coefficient of `x^k` in
/// `x (x-1) ... (x-n+1)`.
pub fn stirling_first(n: usize, k: usize) -> Result<Integer> {
    if k == 0 || k > n {
        return Err(Error::StirlingIndex { n, k });
    }
    Ok(stirling_row(n)[k - 1].clone())
}

/// Exact `G_1..G_N`. Index `n` is stored at position `n - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GregoryTable {
    values: Vec<BigRational>,
}

/// A stored value that breaks the sign or decay law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableViolation {
    /// `sign(G_n) != (-1)^(n-1)`.
    Sign { n: usize },
    /// `|G_{n+1}| >= |G_n|`.
    NotDecreasing { n: usize },
}

impl GregoryTable {
    pub fn max_index(&self) -> usize {
        self.values.len()
    }

    /// `G_n` for `1 <= n <= max_index`.
    pub fn get(&self, n: usize) -> Option<&BigRational> {
        n.checked_sub(1).and_then(|i| self.values.get(i))
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigRational)> + '_ {
        self.values.iter().enumerate().map(|(i, g)| (i + 1, g))
    }

    /// First violation of the alternating-sign and strict-decay laws, if any.
    pub fn check_invariants(&self) -> std::result::Result<(), TableViolation> {
        for (n, g) in self.iter() {
            let expected = if n % 2 == 1 { 1 } else { -1 };
            if g.cmp0() as i32 != expected {
                return Err(TableViolation::Sign { n });
            }
        }
        for (i, pair) in self.values.windows(2).enumerate() {
            if pair[1].clone().abs() >= pair[0].clone().abs() {
                return Err(TableViolation::NotDecreasing { n: i + 1 });
            }
        }
        Ok(())
    }

    /// Cauchy product of `[1, G_1, ..., G_N]` with `[(-1)^m / (m+1)]`, through
    /// degree `N`. Equals `[1, 0, ..., 0]` when the table is correct.
    pub fn generating_residual(&self) -> Vec<BigRational> {
        let n_max = self.max_index();
        let log_series: Vec<BigRational> = (0..=n_max)
            .map(|m| {
                let sign = if m % 2 == 0 { 1 } else { -1 };
                Rational::from((sign, m as u64 + 1))
            })
            .collect();
        let one = Rational::from(1);
        let coeff = |k: usize| if k == 0 { &one } else { &self.values[k - 1] };
        (0..=n_max)
            .map(|n| {
                let mut acc = Rational::new();
                for k in 0..=n {
                    acc += (coeff(k) * &log_series[n - k]).complete();
                }
                acc
            })
            .collect()
    }

    /// Exact partial sums `S_N = |G_1| + ... + |G_N|` for every `N`.
    pub fn partial_abs_sums(&self) -> Vec<BigRational> {
        let mut acc = Rational::new();
        self.values
            .iter()
            .map(|g| {
                acc += g.clone().abs();
                acc.clone()
            })
            .collect()
    }
}

/// `n!` as an exact integer.
pub fn factorial(n: usize) -> Integer {
    Integer::factorial(n as u32).complete()
}

/// `lcm(1, 2, ..., m)`.
fn lcm_upto(m: usize) -> Integer {
    let mut l = Integer::from(1);
    for i in 2..=m as u64 {
        l.lcm_u_mut(i as u32);
    }
    l
}

/// `G_1..G_{n_max}` from the generating-function recurrence.
///
/// All arithmetic is exact. The recurrence runs fraction-free over the common
/// scale `W = n_max! * lcm(1..=n_max+1)^2`: `a_k = G_k W` is an integer and
/// `a_k / m` is exact for every divisor `m <= n_max + 1` used by the
/// recurrence, since `k! lcm(1..=k+1) G_k` is integral.
pub fn gregory_recurrence(n_max: usize) -> Result<GregoryTable> {
    if n_max == 0 {
        return Err(Error::TooSmall {
            what: "n_max",
            min: 1,
            got: 0,
        });
    }
    let lcm = lcm_upto(n_max + 1);
    let scale = factorial(n_max) * &lcm * &lcm;

    let mut scaled: Vec<Integer> = Vec::with_capacity(n_max + 1);
    scaled.push(scale.clone());
    let mut term = Integer::new();
    for n in 1..=n_max {
        // a_n = -sum_{k<n} (-1)^(n-k) a_k / (n-k+1)
        let mut acc = Integer::new();
        for (k, a_k) in scaled.iter().enumerate() {
            let m = (n - k + 1) as u32;
            term.assign_div_exact(a_k, m);
            if (n - k) % 2 == 0 {
                acc += &term;
            } else {
                acc -= &term;
            }
        }
        acc = -acc;
        scaled.push(acc);
    }

    let values = scaled[1..].iter().map(|a| Rational::from((a, &scale))).collect();
    Ok(GregoryTable { values })
}

trait DivExactAssign {
    fn assign_div_exact(&mut self, num: &Integer, den: u32);
}

impl DivExactAssign for Integer {
    fn assign_div_exact(&mut self, num: &Integer, den: u32) {
        debug_assert!(num.is_divisible_u(den), "inexact division by {den}");
        rug::Assign::assign(&mut *self, num.div_exact_u_ref(den));
    }
}

/// Exact `sum_k coeff(k) / (k + 1)` over a Stirling row, as a rational with
/// denominator dividing `lcm(1..=n+1)`.
fn integrate_monomials(row: impl Iterator<Item = (usize, Integer)>, n: usize) -> Rational {
    let lcm = lcm_upto(n + 1);
    let mut num = Integer::new();
    for (k, c) in row {
        num += c * lcm.div_exact_u_ref(k as u32 + 1).complete();
    }
    Rational::from((num, lcm))
}

/// `G_n = (1/n!) ∫_0^1 x (x-1) ... (x-n+1) dx = (1/n!) sum_k s(n,k) / (k+1)`.
pub fn gregory_stirling(n: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::TooSmall {
            what: "n",
            min: 1,
            got: 0,
        });
    }
    let row = stirling_row(n);
    let integral = integrate_monomials(row.iter().cloned().enumerate().map(|(i, c)| (i + 1, c)), n);
    Ok(integral / factorial(n))
}

/// Cauchy number of the second kind `C2(n) = ∫_0^1 x (x+1) ... (x+n-1) dx`.
///
/// The rising factorial expands with the unsigned Stirling numbers `|s(n,k)|`.
pub fn cauchy_second(n: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::TooSmall {
            what: "n",
            min: 1,
            got: 0,
        });
    }
    let row = stirling_row(n);
    Ok(integrate_monomials(
        row.iter().map(|c| c.clone().abs()).enumerate().map(|(i, c)| (i + 1, c)),
        n,
    ))
}

/// Both sides of `n C2(n-1) - C2(n) = n! |G_n|`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationCheck {
    pub n: usize,
    /// `n C2(n-1) - C2(n)`
    pub lhs: BigRational,
    /// `n! |G_n|`
    pub rhs: BigRational,
    pub holds: bool,
}

/// Evaluates the Cauchy/Gregory relation at `n >= 2`, taking `G_n` from
/// the recurrence so that the two sides come from different expansions.
pub fn check_relation(n: usize) -> Result<RelationCheck> {
    if n < 2 {
        return Err(Error::TooSmall {
            what: "n",
            min: 2,
            got: n as u64,
        });
    }
    let table = gregory_recurrence(n)?;
    check_relation_with(&table, n)
}

/// As [`check_relation`], reading `G_n` from an existing table.
pub fn check_relation_with(table: &GregoryTable, n: usize) -> Result<RelationCheck> {
    if n < 2 {
        return Err(Error::TooSmall {
            what: "n",
            min: 2,
            got: n as u64,
        });
    }
    let g = table.get(n).ok_or(Error::TooSmall {
        what: "table size",
        min: n as u64,
        got: table.max_index() as u64,
    })?;
    let lhs = cauchy_second(n - 1)? * Integer::from(n) - cauchy_second(n)?;
    let rhs = g.clone().abs() * factorial(n);
    let holds = lhs == rhs;
    Ok(RelationCheck { n, lhs, rhs, holds })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: u64) -> Rational {
        Rational::from((n, d))
    }

    // Brute-force polynomial oracle: expand a product of linear factors
    // (x + shift_i) into coefficients and integrate over [0, 1].
    fn integrate_product(shifts: impl Iterator<Item = i64>) -> Rational {
        let mut poly = vec![Rational::from(1)];
        for c in shifts {
            let mut next = vec![Rational::new(); poly.len() + 1];
            for (i, p) in poly.iter().enumerate() {
                next[i + 1] += p;
                next[i] += p.clone() * c;
            }
            poly = next;
        }
        poly.iter()
            .enumerate()
            .map(|(k, c)| c.clone() / Integer::from(k + 1))
            .sum()
    }

    #[test]
    fn first_eight_values() {
        let t = gregory_recurrence(8).unwrap();
        let expected = [
            q(1, 2),
            q(-1, 12),
            q(1, 24),
            q(-19, 720),
            q(3, 160),
            q(-863, 60480),
            q(275, 24192),
            q(-33953, 3628800),
        ];
        assert_eq!(t.values(), &expected);
        assert_eq!(gregory_recurrence(4).unwrap().values(), &expected[..4]);
        assert_eq!(gregory_recurrence(1).unwrap().values(), &[q(1, 2)]);
    }

    #[test]
    fn recurrence_rejects_zero() {
        assert!(gregory_recurrence(0).is_err());
    }

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling_first(3, 2).unwrap(), -3);
        assert_eq!(stirling_first(5, 5).unwrap(), 1);
        assert_eq!(stirling_first(4, 1).unwrap(), -6);
        assert_eq!(stirling_first(5, 2).unwrap(), -50);
        assert_eq!(stirling_first(6, 3).unwrap(), -225);
        assert!(stirling_first(3, 0).is_err());
        assert!(stirling_first(3, 4).is_err());
    }

    #[test]
    fn stirling_row_laws() {
        let t = StirlingTriangle::with_rows(30);
        for n in 1..=30 {
            assert_eq!(*t.get(n, n).unwrap(), 1);
            let mut first = factorial(n - 1);
            if n % 2 == 0 {
                first = -first;
            }
            assert_eq!(*t.get(n, 1).unwrap(), first);
            // Row sums: (x)_n at x = 1 vanishes for n >= 2.
            let sum: Integer = t.row(n).unwrap().iter().sum();
            assert_eq!(sum, if n == 1 { 1 } else { 0 });
        }
        for n in 1..30 {
            for k in 2..=n {
                let lhs = t.get(n + 1, k).unwrap().clone();
                let rhs = t.get(n, k - 1).unwrap().clone() - t.get(n, k).unwrap().clone() * n as u64;
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn stirling_examples_match_polynomial() {
        assert_eq!(gregory_stirling(3).unwrap(), q(1, 24));
        assert_eq!(gregory_stirling(1).unwrap(), q(1, 2));
        assert_eq!(gregory_stirling(8).unwrap(), q(-33953, 3628800));
        for n in 1..=12 {
            let oracle = integrate_product((0..n as i64).map(|i| -i)) / factorial(n);
            assert_eq!(gregory_stirling(n).unwrap(), oracle, "n = {n}");
        }
    }

    #[test]
    fn product_tree_matches_triangle() {
        let t = StirlingTriangle::with_rows(120);
        for n in [1, 2, 3, 16, 17, 33, 64, 119, 120] {
            let c = rising_factorial_coefficients(n);
            assert_eq!(c.len(), n + 1);
            assert_eq!(c[0], if n == 0 { 1 } else { 0 });
            for (k, ck) in c.iter().enumerate().skip(1) {
                assert_eq!(*ck, t.get(n, k).unwrap().clone().abs(), "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn large_rows_agree_across_memo_limit() {
        let n = MEMO_ROW_LIMIT + 3;
        let mut t = StirlingTriangle::with_rows(MEMO_ROW_LIMIT);
        t.extend_to(n);
        assert_eq!(&*stirling_row(n), t.row(n).unwrap());
    }

    #[test]
    fn cauchy_second_examples() {
        assert_eq!(cauchy_second(1).unwrap(), q(1, 2));
        assert_eq!(cauchy_second(2).unwrap(), q(5, 6));
        assert_eq!(cauchy_second(3).unwrap(), q(9, 4));
        for n in 1..=12 {
            let oracle = integrate_product(0..n as i64);
            assert_eq!(cauchy_second(n).unwrap(), oracle, "n = {n}");
        }
        assert!(cauchy_second(0).is_err());
    }

    #[test]
    fn relation_examples() {
        let r2 = check_relation(2).unwrap();
        assert!(r2.holds);
        assert_eq!(r2.lhs, q(1, 6));
        let r3 = check_relation(3).unwrap();
        assert!(r3.holds);
        assert_eq!(r3.rhs, q(1, 4));
        assert!(check_relation(10).unwrap().holds);
        assert!(check_relation(1).is_err());
    }

    #[test]
    fn dual_methods_agree_small() {
        let t = gregory_recurrence(40).unwrap();
        for (n, g) in t.iter() {
            assert_eq!(*g, gregory_stirling(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn residual_is_unit_vector() {
        let t = gregory_recurrence(25).unwrap();
        let r = t.generating_residual();
        assert_eq!(r.len(), 26);
        assert_eq!(r[0], 1);
        assert!(r[1..].iter().all(|c| *c == 0));
    }

    #[test]
    fn invariants_detect_corruption() {
        let mut t = gregory_recurrence(10).unwrap();
        assert_eq!(t.check_invariants(), Ok(()));
        t.values[4] = -t.values[4].clone();
        assert_eq!(t.check_invariants(), Err(TableViolation::Sign { n: 5 }));
        let mut t = gregory_recurrence(10).unwrap();
        t.values[6] = t.values[5].clone().abs();
        assert_eq!(t.check_invariants(), Err(TableViolation::NotDecreasing { n: 6 }));
    }

    #[test]
    fn partial_sums_increase_below_one() {
        let t = gregory_recurrence(60).unwrap();
        let sums = t.partial_abs_sums();
        assert!(sums.windows(2).all(|w| w[1] > w[0]));
        assert!(sums.iter().all(|s| *s < 1));
    }
}
