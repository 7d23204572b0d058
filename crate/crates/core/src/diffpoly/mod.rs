//! Laurent difference polynomials with generic coefficients, their norm
//! forms and transforms, and the symbolic support and order matrices built
//! from them.

mod matrix;
mod poly;

pub use matrix::{order_matrix, symbolic_support_matrix, symbolic_support_vector, OrderMatrix, SupportMatrix, SymbolicEntry};
pub use poly::{all_vars_of, CoeffRef, DiffPolynomial, DiffTerm, LaurentMonomial, Order, VarRef};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiffError {
    #[error("the zero polynomial has no norm form")]
    ZeroPolynomial,
    #[error("coefficient index out of range for symbol encoding: {0}")]
    IndexOverflow(String),
}
