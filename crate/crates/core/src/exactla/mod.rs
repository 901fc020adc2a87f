//! Exact linear algebra over the rationals.
//!
//! Everything here is dense and exact. Subspaces are stored by their
//! reduced row-echelon basis, so two subspaces are equal as sets exactly when
//! their `Subspace` values compare equal.

mod matrix;
mod subspace;

pub use matrix::{Matrix, Rref, Solution};
pub use subspace::Subspace;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse `{0}` as an exact rational (expected `n` or `n/d`)")]
    ParseScalar(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rows have unequal lengths")]
    RaggedRows,
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<(), ExactError> {
    if expected == found {
        Ok(())
    } else {
        Err(ExactError::DimensionMismatch { expected, found })
    }
}
