//! Eigenvalue tables from elliptic curves, the locus where two tables agree
//! up to a power, Dirichlet characters, and recovery of a twisting
//! character.

mod character;
mod curve;
mod table;
mod twist;

use num_bigint::BigInt;

pub use character::{
    enumerate_characters, fundamental_discriminant, generators, jacobi, kronecker,
    primitive_characters, quadratic_character, DirichletCharacter, Generator, MAX_MODULUS,
};
pub use curve::{
    ap_table, ap_table_with_threads, legendre, quadratic_twist, within_hasse, EllipticCurve,
};
pub use table::EigenvalueTable;
pub use twist::{
    dense_locus_level, find_twist, power_locus, twist_pipeline, PipelineReport, PowerLocus,
    TwistMatch, TwistReport, Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModularError {
    #[error("curve y^2 = x^3 + {0}x + {1} is singular")]
    SingularCurve(i64, i64),
    #[error("twisted coefficients overflow i64")]
    CoefficientOverflow,
    #[error("{0} is not a nonzero squarefree integer")]
    NotSquarefree(i64),
    #[error("Hasse bound fails at p = {p}: a_p = {ap}")]
    HasseViolation { p: u64, ap: BigInt },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} divides the level hint")]
    BadPrimeEntry(u64),
    #[error("modulus {0} is out of range")]
    BadModulus(u64),
    #[error("exponent vector does not fit the generators mod {0}")]
    BadExponents(u64),
    #[error("the tables share no primes")]
    EmptyIntersection,
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
