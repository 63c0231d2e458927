//! Torus-weight model of representations with connected monodromy.
//!
//! A representation is recorded by the multiset of its weights, integer
//! vectors in `Z^rank`. Tensor and symmetric powers act on weights by summing
//! ordered tuples and unordered multisets respectively, and the character is
//! the Laurent polynomial `Σ x^λ`.

use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::exactnum::{ExactError, LaurentPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightsError {
    #[error("weight multiset must be nonempty")]
    Empty,
    #[error("weights have inconsistent ranks ({0} vs {1})")]
    RankMismatch(usize, usize),
    #[error("multisets have different sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("power must be positive")]
    ZeroPower,
    #[error("expected {expected} weights for S^{k} of a multiset of {n} weights, got {got}")]
    WrongSymmetricPowerSize { expected: u128, got: usize, k: u32, n: usize },
    #[error("leading weight {0:?} is not divisible by {1}")]
    NonIntegralLeadingWeight(Vec<i64>, u32),
    #[error("multiset is not a symmetric power of any {0}-element multiset")]
    VerificationFailed(usize),
    #[error("equal character powers but different weights: {0} vs {1}")]
    TheoremViolation(WeightMultiset, WeightMultiset),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl From<ExactError> for WeightsError {
    fn from(e: ExactError) -> Self {
        match e {
            ExactError::RankMismatch(a, b) => WeightsError::RankMismatch(a, b),
            ExactError::ZeroExponent => WeightsError::ZeroPower,
        }
    }
}

/// Weights with multiplicity, stored in descending lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightMultiset {
    rank: usize,
    weights: Vec<Vec<i64>>,
}

impl WeightMultiset {
    pub fn new(weights: Vec<Vec<i64>>) -> Result<Self, WeightsError> {
        let rank = weights.first().ok_or(WeightsError::Empty)?.len();
        if let Some(w) = weights.iter().find(|w| w.len() != rank) {
            return Err(WeightsError::RankMismatch(rank, w.len()));
        }
        Ok(Self::from_sorted_unchecked(rank, weights))
    }

    fn from_sorted_unchecked(rank: usize, mut weights: Vec<Vec<i64>>) -> Self {
        weights.sort_unstable_by(|a, b| b.cmp(a));
        WeightMultiset { rank, weights }
    }

    /// Rank-1 multiset from scalars.
    pub fn from_scalars(ws: &[i64]) -> Result<Self, WeightsError> {
        Self::new(ws.iter().map(|&w| vec![w]).collect())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Weights in descending lexicographic order.
    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    /// Lexicographically largest weight.
    pub fn lexmax(&self) -> &[i64] {
        &self.weights[0]
    }

    /// `self - other` as multisets, `None` unless `other ⊆ self`.
    fn difference(&self, other: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
        // both descending
        let mut out = Vec::with_capacity(self.weights.len());
        let mut j = 0;
        for w in &self.weights {
            if j < other.len() && other[j] == *w {
                j += 1;
            } else {
                if j < other.len() && other[j] > *w {
                    return None;
                }
                out.push(w.clone());
            }
        }
        (j == other.len()).then_some(out)
    }
}

impl fmt::Display for WeightMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .weights
            .iter()
            .map(|w| {
                let s: Vec<String> = w.iter().map(i64::to_string).collect();
                format!("({})", s.join(","))
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl WeightMultiset {
    /// Plain-text form: one weight per line as comma-separated integers.
    pub fn to_text(&self) -> String {
        self.weights
            .iter()
            .map(|w| {
                let s: Vec<String> = w.iter().map(i64::to_string).collect();
                s.join(",") + "\n"
            })
            .collect()
    }
}

impl FromStr for WeightMultiset {
    type Err = WeightsError;

    /// Parses the plain-text form. Blank lines and `#` comments are skipped;
    /// a rank-0 weight is written as an empty pair of parentheses `()`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut weights = Vec::new();
        for (i, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line == "()" {
                weights.push(Vec::new());
                continue;
            }
            let w: Result<Vec<i64>, _> = line.split(',').map(|t| t.trim().parse::<i64>()).collect();
            weights.push(w.map_err(|e| WeightsError::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?);
        }
        WeightMultiset::new(weights)
    }
}

/// `Σ_λ x^λ` over the weights, with multiplicity.
pub fn character(w: &WeightMultiset) -> LaurentPolynomial {
    let mut p = LaurentPolynomial::zero(w.rank);
    for lambda in &w.weights {
        p.add_term(lambda.clone(), BigInt::one());
    }
    p
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Weights of `T^k`: sums over all ordered `k`-tuples, `n^k` of them.
pub fn tensor_power(w: &WeightMultiset, k: u32) -> Result<WeightMultiset, WeightsError> {
    if k == 0 {
        return Err(WeightsError::ZeroPower);
    }
    let mut acc = w.weights.clone();
    for _ in 1..k {
        acc = acc
            .iter()
            .flat_map(|s| w.weights.iter().map(move |l| add(s, l)))
            .collect();
    }
    Ok(WeightMultiset::from_sorted_unchecked(w.rank, acc))
}

/// Sums over all `k`-multisets of positions in `weights`.
fn multiset_sums(rank: usize, weights: &[Vec<i64>], k: u32) -> Vec<Vec<i64>> {
    // (partial sum, smallest position still allowed)
    let mut layer: Vec<(Vec<i64>, usize)> = vec![(vec![0; rank], 0)];
    for _ in 0..k {
        layer = layer
            .iter()
            .flat_map(|(s, start)| {
                (*start..weights.len()).map(move |i| (add(s, &weights[i]), i))
            })
            .collect();
    }
    layer.into_iter().map(|(s, _)| s).collect()
}

/// Weights of `S^k`: sums over unordered `k`-multisets of positions,
/// `C(n+k-1, k)` of them.
pub fn symmetric_power(w: &WeightMultiset, k: u32) -> Result<WeightMultiset, WeightsError> {
    if k == 0 {
        return Err(WeightsError::ZeroPower);
    }
    Ok(WeightMultiset::from_sorted_unchecked(
        w.rank,
        multiset_sums(w.rank, &w.weights, k),
    ))
}

pub fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n.saturating_sub(k));
    (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

/// Recover the `n` weights whose `k`-th symmetric power is `s`.
///
/// The largest weight of `S^k` is `kλ_1`. Once a prefix `λ_1 ≥ … ≥ λ_j` is
/// known, every sum not explained by `S^k(λ_1..λ_j)` involves a later weight,
/// and the largest of these is `(k-1)λ_1 + λ_{j+1}`. Peeling repeats until
/// `n` weights are known, then the answer is checked by expanding forward.
pub fn recover_from_symmetric_power(
    s: &WeightMultiset,
    k: u32,
    n: usize,
) -> Result<WeightMultiset, WeightsError> {
    if k == 0 {
        return Err(WeightsError::ZeroPower);
    }
    let expected = binomial((n + k as usize - 1) as u64, k as u64);
    if n == 0 || s.len() as u128 != expected {
        return Err(WeightsError::WrongSymmetricPowerSize {
            expected,
            got: s.len(),
            k,
            n,
        });
    }
    let top = s.lexmax();
    if top.iter().any(|c| c % k as i64 != 0) {
        return Err(WeightsError::NonIntegralLeadingWeight(top.to_vec(), k));
    }
    let lead: Vec<i64> = top.iter().map(|c| c / k as i64).collect();
    let shift: Vec<i64> = lead.iter().map(|c| c * (k as i64 - 1)).collect();
    let mut recovered = vec![lead];
    while recovered.len() < n {
        let mut explained = multiset_sums(s.rank, &recovered, k);
        explained.sort_unstable_by_key(|w| Reverse(w.clone()));
        let rest = s
            .difference(&explained)
            .ok_or(WeightsError::VerificationFailed(n))?;
        let next_sum = rest.first().ok_or(WeightsError::VerificationFailed(n))?;
        let next: Vec<i64> = next_sum.iter().zip(&shift).map(|(a, b)| a - b).collect();
        if next > recovered[recovered.len() - 1] {
            return Err(WeightsError::VerificationFailed(n));
        }
        recovered.push(next);
    }
    let w = WeightMultiset::from_sorted_unchecked(s.rank, recovered);
    if symmetric_power(&w, k)? != *s {
        return Err(WeightsError::VerificationFailed(n));
    }
    Ok(w)
}

/// Whether `character(w1)^m = character(w2)^m`.
pub fn char_power_equal(
    w1: &WeightMultiset,
    w2: &WeightMultiset,
    m: u32,
) -> Result<bool, WeightsError> {
    if w1.rank != w2.rank {
        return Err(WeightsError::RankMismatch(w1.rank, w2.rank));
    }
    Ok(crate::exactnum::laurent_pow_eq(&character(w1), &character(w2), m)?)
}

/// Decide potential equivalence from equal `m`-th character powers.
///
/// On a connected torus, equal `m`-th powers of the characters force equal
/// characters and hence equal weights. A `true` answer with differing
/// multisets is reported as [`WeightsError::TheoremViolation`].
pub fn conclude_equivalence(
    w1: &WeightMultiset,
    w2: &WeightMultiset,
    m: u32,
) -> Result<bool, WeightsError> {
    if w1.len() != w2.len() {
        return Err(WeightsError::SizeMismatch(w1.len(), w2.len()));
    }
    let equal = char_power_equal(w1, w2, m)?;
    if equal && w1 != w2 {
        return Err(WeightsError::TheoremViolation(w1.clone(), w2.clone()));
    }
    Ok(equal)
}
