//! Exact scalar and polynomial arithmetic.
//!
//! Everything downstream branches on exact zero tests, so the only entry
//! domains are [`Rational`] and [`LaurentPoly`]. Both implement
//! [`EntryDomain`], which is what the matrix algorithms are generic over.

mod det;
mod laurent;
mod matrix;
mod rational;

pub use det::{cofactor_det, det_exact, rank};
pub use laurent::{Exponents, LaurentPoly, VarRegistry};
pub use matrix::Matrix;
pub use rational::{parse_rational, rational_to_string, Rational};

use std::fmt::Debug;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact division")]
    InexactDivision,
    #[error("variable registries differ")]
    RegistryMismatch,
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("empty matrix")]
    EmptyMatrix,
    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
}

/// A commutative ring with a decidable zero test and exact division where it
/// is defined.
///
/// The `*_like` constructors take a witness value because a Laurent
/// polynomial's zero must carry the variable registry of its siblings.
pub trait EntryDomain: Clone + PartialEq + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn vanishes(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Returns `q` with `q * rhs == self`, or an error if no such `q` exists
    /// in the domain.
    fn div_exact(&self, rhs: &Self) -> Result<Self, ArithError>;
}
