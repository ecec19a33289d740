//! Prime fields and sparse multivariate polynomials over them.
//!
//! Polynomials keep their terms in a map ordered by graded lexicographic
//! order on exponent vectors. Multiplication can drop every monomial whose
//! exponent exceeds a per-variable cap; exponentiation applies the cap after
//! each intermediate product, which is sound because exponents only grow.

mod field;
mod poly;
mod text;

pub use field::{is_prime, PrimeField, MAX_MODULUS};
pub use poly::{AffineForm, ExpCap, Monomial, Order, Poly, DENSE_CELL_LIMIT};
pub use text::parse_poly;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
    #[error("ZeroInverse: zero has no inverse")]
    ZeroInverse,
    #[error("ShapeMismatch: {0}")]
    ShapeMismatch(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub(crate) fn shape(msg: impl Into<String>) -> PolyError {
    PolyError::ShapeMismatch(msg.into())
}
