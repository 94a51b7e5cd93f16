use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;
use crate::{Error, Result};

/// `num / den` as a reduced rational. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"`, an integer, or a finite decimal literal (optionally with
/// an exponent) into an exact rational. Decimals never pass through binary
/// floating point: `"0.2"` is exactly `1/5`.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let s = input.trim();
    let fail = |reason: &str| Error::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    if s.is_empty() {
        return Err(fail("empty input"));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_integer(p.trim(), true).ok_or_else(|| fail("numerator is not an integer"))?;
        let q = parse_integer(q.trim(), false)
            .ok_or_else(|| fail("denominator is not a positive integer"))?;
        if q.is_zero() {
            return Err(fail("zero denominator"));
        }
        return Ok(Rational::new(p, q));
    }
    parse_decimal(s).ok_or_else(|| fail("not a fraction or finite decimal"))
}

fn parse_integer(s: &str, allow_sign: bool) -> Option<BigInt> {
    let digits = match s.strip_prefix(['+', '-']) {
        Some(rest) if allow_sign => rest,
        Some(_) => return None,
        None => s,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, unsigned) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = unsigned.split_once('.').unwrap_or((unsigned, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - i32::try_from(frac_part.len()).ok()?;
    let ten = BigInt::from(10u8);
    let mut value = Rational::from_integer(digits);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, scale.unsigned_abs() as usize));
    }
    Some(if negative { -value } else { value })
}

/// Convenience methods for reporting rationals.
pub trait RationalExt {
    /// `"p/q"`, or just `"p"` when the denominator is one. Parsing the output
    /// with [`parse_rational`] reproduces the value exactly.
    fn to_exact_string(&self) -> String;
    /// Nearest double; for display only.
    fn to_f64_lossy(&self) -> f64;
    /// Greatest integer not exceeding the value.
    fn floor_int(&self) -> BigInt;
    /// Returns the exact square root when the value is the square of a
    /// non-negative rational.
    fn exact_sqrt(&self) -> Option<Rational>;
}

impl RationalExt for Rational {
    fn to_exact_string(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    fn floor_int(&self) -> BigInt {
        self.floor().to_integer()
    }

    fn exact_sqrt(&self) -> Option<Rational> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        (&n * &n == *self.numer() && &d * &d == *self.denom()).then(|| Rational::new(n, d))
    }
}

/// The rational with the smallest denominator in the closed interval
/// between `a` and `b` (ties broken by smallest absolute numerator).
pub fn simplest_between(a: &Rational, b: &Rational) -> Rational {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if !lo.is_positive() && !hi.is_negative() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let ceil = lo.ceil();
    if &ceil <= hi {
        return ceil;
    }
    let fl = lo.floor();
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}
