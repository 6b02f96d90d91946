//! Exact arithmetic in number fields: elements in an integral basis,
//! normalized absolute values, ideals in Hermite form, prime factorization
//! of rational primes, the Möbius function on ideals, and Dedekind zeta
//! values.
//!
//! Archimedean absolute values are normalized so that a complex place
//! contributes `|sigma(x)|^2`, which makes the product formula hold without
//! multiplicities.

mod field;
mod ideal;
mod places;
mod zeta;

pub use field::{FieldElement, NumberField};
pub use ideal::{
    content_ideal_norm, factor_ideal, factor_rational_prime, moebius_ideal, splitting_type, IdealZ,
    PrimeIdeal,
};
pub use places::{
    absolute_value, archimedean_absolute_value_exact, archimedean_places, finite_absolute_value,
    ord, product_formula_defect, support, Place,
};
pub use zeta::{dedekind_zeta, residue_at_one, Residue, ZetaValue};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NfError {
    #[error("minimal polynomial is reducible: {0}")]
    ReduciblePolynomial(String),
    #[error("inconsistent integral basis: {0}")]
    InconsistentBasis(String),
    #[error("absolute value of zero at a finite place")]
    ZeroAtFinitePlace,
    #[error("prime {0} divides the index of the basis; supply its factorization explicitly")]
    IndexDivisor(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("all coordinates are zero")]
    AllZero,
    #[error("zero ideal")]
    ZeroIdeal,
    #[error("element is not integral")]
    NotIntegral,
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("value exceeds the 64-bit factorization range")]
    TooLarge,
}
