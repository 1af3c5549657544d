//! Exact rational scalars.
//!
//! Every coefficient in the crate is a [`Rational`]: an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator. The wire form
//! is `"p/q"`, or `"p"` when the denominator is one.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"`, `"p"`, with an optional leading `-` (or U+2212).
pub fn parse(s: &str) -> Result<Rational> {
    let t = s.trim();
    let (neg, body) = if let Some(rest) = t.strip_prefix('-') {
        (true, rest)
    } else if let Some(rest) = t.strip_prefix('\u{2212}') {
        (true, rest)
    } else {
        (false, t)
    };
    let bad = || Error::ParseRational(s.to_string());
    let digits = |x: &str| -> Result<BigInt> {
        if x.is_empty() || !x.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        x.parse::<BigInt>().map_err(|_| bad())
    };
    let value = match body.split_once('/') {
        Some((p, q)) => {
            let q = digits(q)?;
            if q.is_zero() {
                return Err(bad());
            }
            Rational::new(digits(p)?, q)
        }
        None => Rational::from_integer(digits(body)?),
    };
    Ok(if neg { -value } else { value })
}

/// Canonical wire form.
pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Bit length of the larger of `|numerator|` and denominator.
pub fn bit_length(r: &Rational) -> u64 {
    r.numer().bits().max(r.denom().bits())
}

pub fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / int(2)
}

pub fn is_zero(r: &Rational) -> bool {
    r.is_zero()
}
