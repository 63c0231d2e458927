//! Exact arithmetic: roots of unity, cyclotomic numbers, univariate
//! polynomials over `Q` and integer Laurent polynomials. No floating point.

mod cyclotomic;
mod laurent;
mod poly;
mod rou;

pub use cyclotomic::{cyclo_eq, cyclotomic_polynomial, CyclotomicNumber};
pub use laurent::{laurent_pow_eq, LaurentPolynomial};
pub use poly::QPoly;
pub use rou::{rou_pow, RootOfUnity};

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("exponent must be positive")]
    ZeroExponent,
}
