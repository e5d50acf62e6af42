//! Exact rational carrier.
//!
//! `BigRational` already keeps values in lowest terms with a positive
//! denominator, so it is used directly.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

pub type ExactRational = BigRational;

/// Parses `"num/den"`. Decimal and exponent notation are rejected so that no
/// floating-point value reaches the exact code paths.
pub fn parse_rational(text: &str) -> Result<ExactRational> {
    let invalid = || Error::domain("rational", text, "the form num/den");
    let (num, den) = text.trim().split_once('/').ok_or_else(invalid)?;
    let num: BigInt = num.trim().parse().map_err(|_| invalid())?;
    let den: BigInt = den.trim().parse().map_err(|_| invalid())?;
    if den == BigInt::from(0) {
        return Err(Error::domain("denominator", 0, "nonzero integers"));
    }
    Ok(BigRational::new(num, den))
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> ExactRational {
    BigRational::new(num.into(), den.into())
}

/// Serializes an `ExactRational` as its `"num/den"` string.
pub fn serialize_str<S: serde::Serializer>(v: &ExactRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&format_args!("{}/{}", v.numer(), v.denom()))
}
