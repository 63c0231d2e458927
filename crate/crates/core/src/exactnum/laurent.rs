//! Multivariate Laurent polynomials with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ExactError;

/// `Σ c_v x^v` over exponent vectors `v ∈ Z^rank`. Terms are kept in a
/// lexicographically ordered map and zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    rank: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero(rank: usize) -> Self {
        LaurentPolynomial {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(vec![0; rank], BigInt::one())
    }

    /// `coeff · x^exponents`; the rank is `exponents.len()`.
    pub fn monomial(exponents: Vec<i64>, coeff: BigInt) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, coeff);
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &BigInt)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coeff(&self, exponents: &[i64]) -> BigInt {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    /// Sum of coefficients, i.e. the value at `x = (1, …, 1)`.
    pub fn coeff_sum(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn add_term(&mut self, exponents: Vec<i64>, coeff: BigInt) {
        assert_eq!(exponents.len(), self.rank, "exponent vector of wrong rank");
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exponents).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    fn check_rank(&self, other: &Self) -> Result<(), ExactError> {
        if self.rank != other.rank {
            return Err(ExactError::RankMismatch(self.rank, other.rank));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_rank(other)?;
        let mut acc: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let k: Vec<i64> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                *acc.entry(k).or_default() += va * vb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(LaurentPolynomial {
            rank: self.rank,
            terms: acc,
        })
    }

    pub fn pow(&self, mut m: u32) -> Self {
        let mut acc = Self::one(self.rank);
        let mut base = self.clone();
        while m > 0 {
            if m & 1 == 1 {
                acc = acc.mul(&base).expect("same rank");
            }
            m >>= 1;
            if m > 0 {
                base = base.mul(&base).expect("same rank");
            }
        }
        acc
    }
}

/// Whether `f^m = g^m` exactly.
pub fn laurent_pow_eq(
    f: &LaurentPolynomial,
    g: &LaurentPolynomial,
    m: u32,
) -> Result<bool, ExactError> {
    f.check_rank(g)?;
    if m == 0 {
        return Err(ExactError::ZeroExponent);
    }
    Ok(f.pow(m) == g.pow(m))
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let var = |i: usize| {
            if self.rank == 1 {
                "x".to_string()
            } else {
                format!("x{}", i + 1)
            }
        };
        for (n, (exps, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if n == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mono: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| match e {
                    1 => var(i),
                    _ => format!("{}^{}", var(i), e),
                })
                .collect();
            let a = c.abs();
            match (mono.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{a}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}
