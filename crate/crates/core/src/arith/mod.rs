//! Exact integer and rational arithmetic.
//!
//! Rationals are `num_rational::BigRational`, which keeps the sign in the
//! numerator and the fraction reduced, so structural equality is value
//! equality. Integer factorization and exact integer roots live in
//! [`factor`].

mod factor;

pub use factor::{factorize, int_nth_root, is_prime, FactorBudget, PrimeFactorization};
pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid digit in rational literal {0:?}")]
    InvalidDigit(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("{0:?} is not in lowest terms")]
    NotReduced(String),
}

/// Parses the rational text format: `n` or `n/d`, optional leading `-`,
/// digits only, in lowest terms with a positive denominator.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseRationalError> {
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    if body.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let (num_text, den_text) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let digits = |s: &str| -> Result<BigInt, ParseRationalError> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRationalError::InvalidDigit(text.to_string()));
        }
        Ok(s.parse::<BigInt>().expect("ascii digits parse"))
    };
    let mut num = digits(num_text)?;
    let den = match den_text {
        Some(d) => digits(d)?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(text.to_string()));
    }
    if !num.gcd(&den).is_one() && !(num.is_zero() && den.is_one()) {
        return Err(ParseRationalError::NotReduced(text.to_string()));
    }
    if negative {
        num = -num;
    }
    Ok(BigRational::new_raw(num, den))
}

/// Renders a rational in the text format accepted by [`parse_rational`].
pub fn format_rational(q: &BigRational) -> String {
    q.to_string()
}

pub fn rational_from_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Numerator of a positive rational as an unsigned integer.
pub(crate) fn positive_parts(q: &BigRational) -> Option<(BigUint, BigUint)> {
    if !q.is_positive() {
        return None;
    }
    Some((
        q.numer().magnitude().clone(),
        q.denom().magnitude().clone(),
    ))
}

/// `base^exp` for a rational base and an unsigned exponent.
pub fn rational_pow(base: &BigRational, exp: u64) -> BigRational {
    let mut result = BigRational::one();
    let mut acc = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= &acc;
        }
        e >>= 1;
        if e > 0 {
            acc = &acc * &acc;
        }
    }
    result
}
