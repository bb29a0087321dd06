//! Text form of exact rationals: `"p/q"`, or `"p"` when the denominator is 1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn format(q: &BigRational) -> String {
    q.to_string()
}

pub fn parse(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("not a rational number: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Fixed-point decimal with `places` digits, rounded half away from zero.
pub fn to_fixed(q: &BigRational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = q * BigRational::from_integer(scale.clone());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let rounded = if scaled.is_negative() {
        -((-scaled + half).floor())
    } else {
        (scaled + half).floor()
    }
    .to_integer();
    let neg = rounded.is_negative();
    let digits = rounded.abs().to_string();
    let p = places as usize;
    let padded = if digits.len() <= p { format!("{}{}", "0".repeat(p + 1 - digits.len()), digits) } else { digits };
    let (int, frac) = padded.split_at(padded.len() - p);
    let sign = if neg { "-" } else { "" };
    if p == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Nearest `f64`, for diagnostics only.
pub fn to_f64(q: &BigRational) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("3/6").unwrap(), q(1, 2));
        assert_eq!(parse("-4").unwrap(), q(-4, 1));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert_eq!(format(&q(6, 4)), "3/2");
        assert_eq!(format(&q(5, 1)), "5");
    }

    #[test]
    fn fixed_point() {
        assert_eq!(to_fixed(&q(1, 3), 6), "0.333333");
        assert_eq!(to_fixed(&q(2, 3), 6), "0.666667");
        assert_eq!(to_fixed(&q(-1, 8), 2), "-0.13");
        assert_eq!(to_fixed(&q(7, 1), 3), "7.000");
        assert_eq!(to_fixed(&q(-1, 3), 0), "0");
    }
}
