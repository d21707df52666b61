//! Exact algebra: coefficient fields, multivariate polynomials, the division
//! algorithm and Buchberger's algorithm.

mod field;
mod groebner;
mod monomial;
mod poly;

pub use field::{
    is_prime, ComplexFloat, ExactScalar, Field, GaussRat, GaussianRationals, PrimeField,
    RandomElem, ScalarContext, FLOAT_REL_TOL,
};
pub use groebner::{
    buchberger, buchberger_with, contains_unit, ideal_membership, s_polynomial, Budget,
    GroebnerBasis, GroebnerConfig, GroebnerOutcome, GroebnerStats, Strategy,
};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::{divide_multivariate, PolyRing, Polynomial, Term};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("scalars belong to different field contexts")]
    ContextMismatch,
    #[error("polynomials belong to different rings (variable catalog, field or order)")]
    RingMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("operation needs a nonzero polynomial")]
    ZeroPolynomial,
    #[error("all generators are zero")]
    AllZeroGenerators,
}
