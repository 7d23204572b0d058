//! Exact polynomial arithmetic: sparse multivariate polynomials over `Z`,
//! dense univariate polynomials in `Z[x]`, and fraction-free linear algebra
//! over both.

mod monomial;
mod poly;
mod ring;
mod unipoly;

pub use monomial::{Monomial, Symbol};
pub use poly::MultiPoly;
pub use ring::{determinant, determinant_by_minors, echelon, Echelon, ExactDomain};
pub use unipoly::UniPoly;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomial division leaves a remainder")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("no value assigned to symbol {0}")]
    MissingSymbol(Symbol),
}
