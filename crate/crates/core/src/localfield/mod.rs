//! Uniform exponents for power-conjugacy over `ℓ`-adic fields.
//!
//! If two semisimple elements of `GL_n(F)` have conjugate `k`-th powers, their
//! eigenvalues differ by roots of unity living in an extension of `F` of
//! degree at most `(n!)^2`. The size of such root-of-unity groups is bounded
//! in terms of `ℓ` and `[F : Q_ℓ]` alone, which yields an exponent `m` that
//! works for every pair at once.

mod matrix;

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, primes_up_to};
use crate::exactnum::{cyclotomic_polynomial, QPoly};

pub use matrix::RationalMatrix;

/// Largest degree bound `D = d_F·(n!)^2` accepted by [`uniform_exponent`].
pub const MAX_DEGREE_BOUND: u64 = 4096;

/// Largest `(n!)^2` accepted by [`candidate_global_exponents`].
pub const MAX_CANDIDATE_BOUND: u64 = 518_400;

/// `m0!` is only expanded when `m0` is at most this.
pub const FACTORIAL_EXPONENT_LIMIT: u64 = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocalFieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("degree and n must be positive")]
    ZeroDegree,
    #[error("degree bound {0} exceeds the supported maximum {MAX_DEGREE_BOUND}")]
    DegreeTooLarge(u128),
    #[error("(n!)^2 for n = {0} exceeds the supported maximum {MAX_CANDIDATE_BOUND}")]
    CandidateBoundTooLarge(u64),
    #[error("matrices must be square of equal size ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("matrix is not semisimple")]
    NotSemisimple,
}

/// A finite extension `F/Q_ℓ`, described by `ℓ` and `[F : Q_ℓ]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalFieldSpec {
    ell: u64,
    degree: u64,
}

impl LocalFieldSpec {
    pub fn new(ell: u64, degree: u64) -> Result<Self, LocalFieldError> {
        if !is_prime(ell) {
            return Err(LocalFieldError::NotPrime(ell));
        }
        if degree == 0 {
            return Err(LocalFieldError::ZeroDegree);
        }
        Ok(LocalFieldSpec { ell, degree })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }
}

/// Bounds on the exponent that turns power-conjugacy into conjugacy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentReport {
    pub degree_bound: u64,
    /// Size of the largest root-of-unity group in an extension of `Q_ℓ` of
    /// degree `<= degree_bound`.
    pub m0: BigUint,
    /// `(f, a)`: unramified degree `f` with `ζ_{ℓ^a}` adjoined attains `m0`.
    pub witness: (u64, u32),
    /// `m0!`, or `None` when `m0` exceeds [`FACTORIAL_EXPONENT_LIMIT`].
    pub factorial_exponent: Option<BigUint>,
    /// lcm of every achievable root-of-unity group order.
    pub sharp_exponent: BigUint,
}

/// `φ(ℓ^a)`, `None` on overflow.
fn phi_prime_power(ell: u64, a: u32) -> Option<u64> {
    if a == 0 {
        Some(1)
    } else {
        ell.checked_pow(a - 1)?.checked_mul(ell - 1)
    }
}

/// Every `(f, a)` with `f·φ(ℓ^a) <= D`, paired with the group order
/// `(ℓ^f - 1)·ℓ^a` of roots of unity in the corresponding field.
fn achievable_orders(ell: u64, d: u64) -> Vec<((u64, u32), BigUint)> {
    let ell_big = BigUint::from(ell);
    let mut out = Vec::new();
    for f in 1..=d {
        let unram = Pow::pow(&ell_big, f) - BigUint::one();
        let mut a = 0u32;
        while let Some(phi) = phi_prime_power(ell, a) {
            if phi.saturating_mul(f) > d {
                break;
            }
            out.push(((f, a), &unram * Pow::pow(&ell_big, a)));
            a += 1;
        }
    }
    out
}

/// Largest number of roots of unity in an extension of `Q_ℓ` of degree at
/// most `d`, with the `(f, a)` attaining it (first in `(f, a)` order on ties).
pub fn max_roots_of_unity(ell: u64, d: u64) -> (BigUint, (u64, u32)) {
    assert!(d >= 1, "degree bound must be positive");
    let mut best: Option<(BigUint, (u64, u32))> = None;
    for (w, order) in achievable_orders(ell, d) {
        if best.as_ref().is_none_or(|(b, _)| order > *b) {
            best = Some((order, w));
        }
    }
    best.expect("f = 1, a = 0 is always admissible")
}

fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

pub fn big_factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// The exponent bounds for `n×n` semisimple elements over `field`.
pub fn uniform_exponent(n: u64, field: LocalFieldSpec) -> Result<ExponentReport, LocalFieldError> {
    if n == 0 {
        return Err(LocalFieldError::ZeroDegree);
    }
    let d = if n <= 30 {
        factorial(n)
            .checked_mul(factorial(n))
            .and_then(|x| x.checked_mul(field.degree as u128))
    } else {
        None
    };
    let d = match d {
        Some(d) if d <= MAX_DEGREE_BOUND as u128 => d as u64,
        Some(d) => return Err(LocalFieldError::DegreeTooLarge(d)),
        None => return Err(LocalFieldError::DegreeTooLarge(u128::MAX)),
    };
    let (m0, witness) = max_roots_of_unity(field.ell, d);
    let sharp_exponent = achievable_orders(field.ell, d)
        .into_iter()
        .fold(BigUint::one(), |acc, (_, w)| acc.lcm(&w));
    let factorial_exponent = m0
        .to_u64()
        .filter(|&m| m <= FACTORIAL_EXPONENT_LIMIT)
        .map(big_factorial);
    Ok(ExponentReport {
        degree_bound: d,
        m0,
        witness,
        factorial_exponent,
        sharp_exponent,
    })
}

/// `{w >= 1 : φ(w) <= bound}`, by building `w` prime power by prime power.
pub fn orders_with_totient_at_most(bound: u64) -> BTreeSet<u64> {
    let primes: Vec<u64> = primes_up_to(bound + 1);
    let mut out = BTreeSet::new();
    fn walk(primes: &[u64], idx: usize, w: u64, phi: u64, bound: u64, out: &mut BTreeSet<u64>) {
        out.insert(w);
        for (i, &p) in primes.iter().enumerate().skip(idx) {
            let mut phi_next = phi * (p - 1);
            if phi_next > bound {
                // primes are ascending, so p - 1 only grows
                break;
            }
            let mut pw = p;
            while phi_next <= bound {
                walk(primes, i + 1, w * pw, phi_next, bound, out);
                pw *= p;
                phi_next *= p;
            }
        }
    }
    walk(&primes, 0, 1, 1, bound, &mut out);
    out
}

/// Orders `w` of roots of unity with `φ(w) <= (n!)^2`.
pub fn candidate_global_exponents(n: u64) -> Result<BTreeSet<u64>, LocalFieldError> {
    if n == 0 {
        return Err(LocalFieldError::ZeroDegree);
    }
    let bound = (1..=n)
        .try_fold(1u64, |acc, k| acc.checked_mul(k))
        .and_then(|f| f.checked_mul(f))
        .filter(|&b| b <= MAX_CANDIDATE_BOUND)
        .ok_or(LocalFieldError::CandidateBoundTooLarge(n))?;
    Ok(orders_with_totient_at_most(bound))
}

/// lcm of [`candidate_global_exponents`].
pub fn candidate_lcm(n: u64) -> Result<BigUint, LocalFieldError> {
    Ok(candidate_global_exponents(n)?
        .into_iter()
        .fold(BigUint::one(), |acc, w| acc.lcm(&BigUint::from(w))))
}

/// Semisimple over `Q̄` iff the squarefree part of the characteristic
/// polynomial already annihilates the matrix.
pub fn is_semisimple(a: &RationalMatrix) -> bool {
    a.eval_poly(&a.charpoly().squarefree_part()).is_zero()
}

fn check_operand(a: &RationalMatrix) -> Result<(), LocalFieldError> {
    if a.det() == num_rational::BigRational::from_integer(0.into()) {
        return Err(LocalFieldError::NotInvertible);
    }
    if !is_semisimple(a) {
        return Err(LocalFieldError::NotSemisimple);
    }
    Ok(())
}

/// Least `m >= 1` with `charpoly(A^m) = charpoly(B^m)`, searched among
/// divisors of `lcm(candidate_global_exponents(n))`.
///
/// The eigenvalue ratios `β_j/α_i` are the roots of `charpoly(B ⊗ A^{-1})`.
/// A ratio that is a root of unity of order `w` forces `Φ_w` to divide that
/// polynomial, so `φ(w) <= n^2`. The least working `m` is the lcm of the
/// orders of the `n` matched ratios, hence the lcm of at most `n` of the
/// cyclotomic orders found; only those candidates are tested.
pub fn power_conjugate_exponent(
    a: &RationalMatrix,
    b: &RationalMatrix,
) -> Result<Option<u64>, LocalFieldError> {
    if a.dim() != b.dim() {
        return Err(LocalFieldError::DimensionMismatch(a.dim(), b.dim()));
    }
    check_operand(a)?;
    check_operand(b)?;
    let n = a.dim();
    if n == 0 {
        return Ok(Some(1));
    }
    let a_inv = a.inverse().ok_or(LocalFieldError::NotInvertible)?;
    let ratios = b.kron(&a_inv).charpoly();
    let orders: Vec<u64> = orders_with_totient_at_most((n * n) as u64)
        .into_iter()
        .filter(|&w| ratios.rem(&cyclotomic_polynomial(w)).is_zero())
        .collect();

    let mut candidates = BTreeSet::from([1u64]);
    let mut frontier = BTreeSet::from([1u64]);
    for _ in 0..n {
        let next: BTreeSet<u64> = frontier
            .iter()
            .flat_map(|&m| orders.iter().map(move |&w| m.lcm(&w)))
            .filter(|m| !candidates.contains(m))
            .collect();
        candidates.extend(next.iter().copied());
        frontier = next;
    }

    for m in candidates {
        if charpoly_of_power(a, m) == charpoly_of_power(b, m) {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

fn charpoly_of_power(a: &RationalMatrix, m: u64) -> QPoly {
    a.pow(m).charpoly()
}
