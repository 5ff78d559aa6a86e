//! Exact rational scalars and their canonical text form.
//!
//! Every numeric value in this crate is a [`Rat`]. Strict inequalities are
//! decided by exact sign tests, never by tolerance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

pub type Rat = BigRational;

/// Shorthand constructor from machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

/// Canonical form: `p/q` with gcd(p, q) = 1 and q > 0, or `p` when q = 1.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q` or a plain integer `n`.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|e| format!("bad numerator {p:?}: {e}"))?;
            let q = BigInt::from_str(q.trim()).map_err(|e| format!("bad denominator {q:?}: {e}"))?;
            if q.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(Rat::new(p, q))
        }
        None => {
            let p = BigInt::from_str(s).map_err(|e| format!("bad rational {s:?}: {e}"))?;
            Ok(Rat::from_integer(p))
        }
    }
}

pub fn is_positive(r: &Rat) -> bool {
    r.is_positive()
}

pub fn is_negative(r: &Rat) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/10", "-7/100", "0", "42", "-1/2"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
    }

    #[test]
    fn parse_reduces_to_canonical() {
        assert_eq!(format_rat(&parse_rat("2/4").unwrap()), "1/2");
        assert_eq!(format_rat(&parse_rat("3/-6").unwrap()), "-1/2");
        assert_eq!(format_rat(&parse_rat("0/5").unwrap()), "0");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(parse_rat("1/0").is_err());
    }
}
