//! Certified evaluation of infinite products weighted by the paperfolding,
//! Thue-Morse and alternating sign sequences, with closed forms in gamma
//! values and a verifier that compares the two.

pub mod algebraicity;
pub mod cli;
pub mod closed_forms;
pub mod error;
pub mod mpnum;
pub mod products;
pub mod sequences;

pub use error::{Error, Result};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Shorthand for the rational `n / d`.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
