//! Exact rationals, negative continued fractions and the admissible slope set.

mod cf;
mod rational;

pub use cf::{
    cf_eval, chain_is_negative_definite, exception_count, exception_indices, negative_expansion,
    omega_check, ContinuedFraction, OmegaWitness, DEFAULT_ENTRY_BOUND, DEFAULT_MAX_LEN,
};
pub use rational::Rational;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("continued fraction tail starting at entry {index} evaluates to zero")]
    ZeroTail { index: usize },
    #[error("{value} is out of range: expected a rational <= -1")]
    OutOfRange { value: Rational },
    #[error("empty continued fraction")]
    Empty,
    #[error("parse error: {0}")]
    Parse(String),
}
