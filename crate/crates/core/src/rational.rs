//! Exact cost arithmetic.
//!
//! Instance costs are stored as `i64` numerators over a per-instance
//! denominator (`cost_scale`), so every sum and comparison inside the solvers
//! is plain integer arithmetic. [`Rational`] is only used at the edges: when
//! parsing, when reporting, and for densities.

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

pub type Rational = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RationalParseError {
    #[error("`{0}` is not an integer, decimal or p/q rational")]
    Malformed(String),
    #[error("`{0}` has a zero denominator")]
    ZeroDenominator(String),
    #[error("`{0}` overflows 64-bit rational arithmetic")]
    Overflow(String),
}

/// Parses `7`, `-3`, `5/2` or `2.5` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let malformed = || RationalParseError::Malformed(text.to_string());
    let overflow = || RationalParseError::Overflow(text.to_string());
    if let Some((num, den)) = text.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| malformed())?;
        let den: i64 = den.trim().parse().map_err(|_| malformed())?;
        if den == 0 {
            return Err(RationalParseError::ZeroDenominator(text.to_string()));
        }
        return Ok(Ratio::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        let den = 10i64.checked_pow(frac.len() as u32).ok_or_else(overflow)?;
        let whole_val: i64 = if whole_digits.is_empty() {
            0
        } else {
            whole_digits.parse().map_err(|_| overflow())?
        };
        let frac_val: i64 = frac.parse().map_err(|_| overflow())?;
        let num = whole_val
            .checked_mul(den)
            .and_then(|w| w.checked_add(frac_val))
            .ok_or_else(overflow)?;
        return Ok(Ratio::new(if negative { -num } else { num }, den));
    }
    let value: i64 = text.trim().parse().map_err(|_| malformed())?;
    Ok(Ratio::from_integer(value))
}

/// Canonical text form: `7` for integers, `p/q` in lowest terms otherwise.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.to_integer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Rescales a list of rationals onto their least common denominator.
///
/// Returns the integer numerators and the shared denominator, or `None` when
/// the rescaled values do not fit in an `i64`.
pub fn common_scale(values: &[Rational]) -> Option<(Vec<i64>, i64)> {
    let mut scale: i64 = 1;
    for v in values {
        scale = scale.checked_mul(*v.denom() / scale.gcd(v.denom()))?;
    }
    let numerators = values
        .iter()
        .map(|v| v.numer().checked_mul(scale / v.denom()))
        .collect::<Option<Vec<_>>>()?;
    Some((numerators, scale))
}

pub(crate) fn scaled(raw: i64, scale: i64) -> Rational {
    Ratio::new(raw, scale)
}

pub fn to_f64(value: &Rational) -> f64 {
    *value.numer() as f64 / *value.denom() as f64
}

/// Smallest integer `x ≥ 1` with `x ≥ base^exponent`, for a non-negative
/// rational exponent `p/q`: the least `x` with `x^q ≥ base^p`. Exact while
/// the powers fit in `u128`, compared in log space beyond that.
pub fn ceil_pow(base: u64, exponent: Rational) -> u64 {
    assert!(*exponent.numer() >= 0, "exponent must be non-negative");
    if base <= 1 || *exponent.numer() == 0 {
        return 1;
    }
    let (p, q) = (*exponent.numer() as u32, *exponent.denom() as u32);
    let target = u128::from(base).checked_pow(p);
    let estimate = (base as f64).powf(f64::from(p) / f64::from(q)).floor();
    let mut x = (estimate as u64).saturating_sub(1).max(1);
    loop {
        let reached = match (target, u128::from(x).checked_pow(q)) {
            (Some(t), Some(v)) => v >= t,
            (Some(_), None) => true,
            (None, _) => (x as f64).ln() * f64::from(q) >= (base as f64).ln() * f64::from(p) - 1e-12,
        };
        if reached {
            return x;
        }
        x += 1;
    }
}
