//! Exact arithmetic in finite fields and univariate polynomial rings over them.

mod embed;
mod field;
mod poly;

use thiserror::Error;

pub use field::{
    field_with_modulus, gcd, is_prime, lth_power_count, make_field, make_primitive_field,
    prime_factors, ElementJson, Field, FieldDesc, FieldElement, FieldJson,
};
pub use embed::{primitive_element, Embedding};
pub use poly::{Polynomial, PolynomialJson};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1, got {0}")]
    BadDegree(u32),
    #[error("modulus must be monic and irreducible")]
    BadModulus,
    #[error("coefficients do not match the field")]
    BadCoefficients,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("field too large")]
    TooLarge,
}
