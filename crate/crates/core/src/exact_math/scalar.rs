//! Helpers around arbitrary-precision rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::MathError;

/// Exact rational scalar. `BigRational` keeps itself in lowest terms with a
/// positive denominator after every arithmetic operation.
pub type ExactScalar = BigRational;

/// `numer / denom` as an exact rational. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> ExactScalar {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(value))
}

/// True when the stored representation is canonical: positive denominator
/// and coprime numerator/denominator.
pub fn is_canonical(value: &ExactScalar) -> bool {
    value.denom().is_positive() && value.numer().gcd(value.denom()).is_one()
}

/// Parses `"p/q"`, `"p"`, or a finite decimal such as `"-0.125"`.
pub fn parse_rational(text: &str) -> Result<ExactScalar, MathError> {
    let text = text.trim();
    let bad = || MathError::Parse(text.to_string());
    if let Some((numer, denom)) = text.split_once('/') {
        let numer: BigInt = numer.trim().parse().map_err(|_| bad())?;
        let denom: BigInt = denom.trim().parse().map_err(|_| bad())?;
        if denom.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(numer, denom));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let whole: BigInt = match whole.trim() {
            "" | "-" | "+" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let frac_value: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let magnitude = BigRational::new(whole.abs() * &scale + frac_value, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let value: BigInt = text.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(value))
}

/// Renders `p/q` (or `p` for integers).
pub fn format_rational(value: &ExactScalar) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Decimal expansion rounded half away from zero to `digits` fractional digits.
pub fn to_decimal(value: &ExactScalar, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = value.abs() * BigRational::from_integer(scale.clone());
    let rounded = (scaled + rat(1, 2)).floor().to_integer();
    let (whole, frac) = rounded.div_rem(&scale);
    let sign = if value.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = digits)
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a ExactScalar>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Lossy conversion for display-only statistics.
pub fn approx_f64(value: &ExactScalar) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}
