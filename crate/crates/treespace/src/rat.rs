//! Exact rational helpers: `p/q` text form used in spec files and reports.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Parses `"p/q"` or `"p"` into a reduced rational. Rejects zero denominators.
pub fn parse_rat(text: &str) -> Result<BigRational, Error> {
    let bad = |msg: &str| Error::Parse {
        what: format!("rational `{text}`: {msg}"),
    };
    let mut parts = text.splitn(2, '/');
    let numer = parts.next().unwrap_or("");
    let numer: BigInt = numer
        .trim()
        .parse()
        .map_err(|_| bad("numerator is not an integer"))?;
    let denom: BigInt = match parts.next() {
        Some(d) => d
            .trim()
            .parse()
            .map_err(|_| bad("denominator is not an integer"))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(bad("denominator is zero"));
    }
    Ok(BigRational::new(numer, denom))
}

/// Formats a rational as `p/q`, or just `p` for integers.
pub fn format_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Absolute difference, used for oscillation and error bounds.
pub fn abs_diff(a: &BigRational, b: &BigRational) -> BigRational {
    (a - b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_formats() {
        assert_eq!(format_rat(&parse_rat("3/4").unwrap()), "3/4");
        assert_eq!(format_rat(&parse_rat("6/8").unwrap()), "3/4");
        assert_eq!(format_rat(&parse_rat("5").unwrap()), "5");
        assert_eq!(format_rat(&parse_rat("-1/2").unwrap()), "-1/2");
        assert_eq!(format_rat(&parse_rat("4/2").unwrap()), "2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }
}
