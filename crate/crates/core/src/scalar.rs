//! Exact rational scalars.
//!
//! Every coefficient in the crate is a `Scalar`: an arbitrary-precision
//! rational kept in lowest terms with a positive denominator. No floating
//! point arithmetic occurs anywhere, so rank computations and
//! nondegeneracy verdicts never depend on tolerances.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

use crate::error::Error;

pub type Scalar = BigRational;

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"` or `"p/q"` into a scalar. Used by the model-file reader and
/// report round-trips; the inverse of [`format_scalar`].
pub fn parse_scalar(text: &str) -> Result<Scalar, Error> {
    let text = text.trim();
    let bad = |_| Error::BadRational(text.to_string());
    match text.split_once('/') {
        None => {
            let n: BigInt = text.parse().map_err(bad)?;
            Ok(Scalar::from_integer(n))
        }
        Some((num, den)) => {
            let n: BigInt = num.trim().parse().map_err(bad)?;
            let d: BigInt = den.trim().parse().map_err(bad)?;
            if d.is_zero() {
                return Err(Error::BadRational(text.to_string()));
            }
            Ok(Scalar::new(n, d))
        }
    }
}

/// Renders a scalar as `"p"` or `"p/q"`, never as a float.
pub fn format_scalar(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Writes a coefficient as a leading term or follow-up term of a sum, e.g.
/// `(+, "2")`, `(-, "1/2")`, with unit coefficients elided when `unit_ok`.
pub fn signed_coeff(s: &Scalar, unit_ok: bool) -> (bool, String) {
    let negative = s.is_negative();
    let abs = s.abs();
    let body = if abs.is_one() && unit_ok {
        String::new()
    } else {
        format_scalar(&abs)
    };
    (negative, body)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for text in ["0", "1", "-7", "3/4", "-22/7"] {
            let s = parse_scalar(text).unwrap();
            assert_eq!(format_scalar(&s), text);
        }
        // Normalization to lowest terms happens on parse.
        assert_eq!(format_scalar(&parse_scalar("6/4").unwrap()), "3/2");
        assert_eq!(format_scalar(&parse_scalar("2/-4").unwrap()), "-1/2");
    }

    #[test]
    fn rejects_malformed_text() {
        for text in ["", "x", "1/0", "1/2/3", "1.5"] {
            assert!(parse_scalar(text).is_err(), "accepted {text:?}");
        }
    }
}
