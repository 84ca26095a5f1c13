//! Exact arithmetic substrate: arbitrary-precision integers and rationals,
//! sparse multivariate polynomials over Z, and matrices over all of these.
//!
//! Integers and rationals are `num_bigint::BigInt` and
//! `num_rational::BigRational`; rationals are always reduced with positive
//! denominator. Everything here is immutable value semantics.

mod matrix;
mod poly;
mod varid;

pub use matrix::{IntMatrix, Matrix, PolyMatrix, RatMatrix, Ring};
pub use poly::{Monomial, MultiPoly};
pub use varid::VarId;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

use crate::error::{Error, Result};

/// Parses a rational from "p/q" or "p" text.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Domain(format!("invalid rational: {s:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Domain(format!("invalid rational: {s:?}")))?;
    if num_traits::Zero::is_zero(&d) {
        return Err(Error::Domain(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

/// Renders a rational as "p/q", or just "p" for integers.
pub fn format_rational(r: &BigRational) -> String {
    if num_traits::One::is_one(r.denom()) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        let r = parse_rational("-6/4").unwrap();
        assert_eq!(format_rational(&r), "-3/2");
        assert_eq!(format_rational(&parse_rational("5").unwrap()), "5");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
