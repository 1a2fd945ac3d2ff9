//! Exact scalars: canonical rationals and rational combinations of radicals of
//! the first six primes.

mod radical;
mod rational;

use core::fmt;

pub use radical::{radsig_equal, radsig_to_float, Exponents, RadicalSignature, PRIMES};
pub use rational::{rat_canonicalize, Rational};

/// Errors raised by scalar construction and parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactError {
    ZeroDenominator,
    DivisionByZero,
    /// Exponent outside `0..=3` in a radical monomial.
    ExponentOutOfRange(u8),
    Parse(alloc::string::String),
}

impl fmt::Display for ExactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactError::ZeroDenominator => f.write_str("zero denominator"),
            ExactError::DivisionByZero => f.write_str("division by zero"),
            ExactError::ExponentOutOfRange(e) => {
                write!(f, "radical exponent {e} outside 0..=3")
            }
            ExactError::Parse(s) => write!(f, "cannot parse {s:?}"),
        }
    }
}

impl core::error::Error for ExactError {}
