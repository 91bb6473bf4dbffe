//! Exact rational scalars.
//!
//! Scalars are arbitrary-precision rationals kept in lowest terms with a
//! positive denominator. The textual form is `"p/q"`, or `"p"` when `q = 1`.

use num::{BigInt, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den`, reduced. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn parse(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::ParseRational(s.to_string());
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn format(q: &Rational) -> String {
    q.to_string()
}

pub fn max<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn min<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn pos(q: &Rational) -> Rational {
    if q.is_positive() {
        q.clone()
    } else {
        Rational::zero()
    }
}

/// Least integer `>= q`.
pub fn ceil(q: &Rational) -> BigInt {
    q.ceil().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("6/8").unwrap(), ratio(3, 4));
        assert_eq!(parse(" -3 ").unwrap(), int(-3));
        assert_eq!(parse("3/-4").unwrap(), ratio(-3, 4));
        assert_eq!(format(&ratio(-6, 4)), "-3/2");
        assert_eq!(format(&int(5)), "5");
        assert!(parse("1/0").is_err());
        assert!(parse("0.5").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn ceiling() {
        assert_eq!(ceil(&ratio(7, 2)), BigInt::from(4));
        assert_eq!(ceil(&int(3)), BigInt::from(3));
        assert_eq!(ceil(&ratio(-1, 2)), BigInt::from(0));
    }
}
