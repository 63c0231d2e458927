//! Densities of prime sets, the density thresholds for potential
//! equivalence, and a finite model of the component group `G/G⁰` in which
//! Chebotarev densities are exact.

mod format;
mod group;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, primes_up_to};
use crate::ratio;

pub use format::{parse_group_spec, GroupSpec, SetDirective};
pub use group::{
    chebotarev_density, find_component_in, sample_frobenius, ClassStableSet, ComponentModel,
    Permutation, MAX_GROUP_ORDER,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DensityError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime set must be strictly ascending and bounded by the cutoff")]
    Unsorted,
    #[error("checkpoints must be ascending and end at the cutoff {0}")]
    BadCheckpoints(u64),
    #[error("component counts must be positive")]
    ZeroComponents,
    #[error("density {0} is outside [0, 1]")]
    OutOfRange(String),
    #[error("trials must be positive")]
    ZeroTrials,
    #[error("group order exceeds {MAX_GROUP_ORDER}")]
    GroupTooLarge,
    #[error("permutation {0} does not act on {1} points")]
    BadPermutation(String, usize),
    #[error("normal subgroup generator {0} is not in the group")]
    NotASubgroup(String),
    #[error("subgroup is not normal: conjugating {0} by {1} leaves it")]
    NotNormal(String, String),
    #[error("set is not stable under conjugation by {0}")]
    NotClassStable(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A set of primes below a cutoff.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSet {
    members: Vec<u64>,
    cutoff: u64,
}

impl PrimeSet {
    pub fn new(members: Vec<u64>, cutoff: u64) -> Result<Self, DensityError> {
        if let Some(&p) = members.iter().find(|&&p| !is_prime(p)) {
            return Err(DensityError::NotPrime(p));
        }
        if members.windows(2).any(|w| w[0] >= w[1]) || members.last().is_some_and(|&p| p > cutoff) {
            return Err(DensityError::Unsorted);
        }
        Ok(PrimeSet { members, cutoff })
    }

    /// Primes `<= cutoff` satisfying `pred`.
    pub fn filtered(cutoff: u64, pred: impl Fn(u64) -> bool) -> Self {
        PrimeSet {
            members: primes_up_to(cutoff).into_iter().filter(|&p| pred(p)).collect(),
            cutoff,
        }
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }
}

/// Prefix count at one checkpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub x: u64,
    pub count: u64,
    pub total: u64,
}

/// Counting density at a finite cutoff, with the largest prefix density over
/// a checkpoint grid standing in for the `limsup`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub count: u64,
    pub total: u64,
    #[serde(with = "ratio")]
    pub empirical: BigRational,
    #[serde(with = "ratio")]
    pub running_sup: BigRational,
    pub checkpoints: Vec<Checkpoint>,
}

fn fraction(count: u64, total: u64) -> BigRational {
    if total == 0 {
        BigRational::zero()
    } else {
        BigRational::new(BigInt::from(count), BigInt::from(total))
    }
}

impl DensityReport {
    /// Density of `members` inside `universe` (both ascending, members a
    /// subset), sampled at each checkpoint. Checkpoints with an empty
    /// universe prefix do not contribute to the running supremum.
    pub fn over_universe(members: &[u64], universe: &[u64], checkpoints: &[u64]) -> Self {
        let mut cps = Vec::with_capacity(checkpoints.len());
        let mut sup = BigRational::zero();
        for &x in checkpoints {
            let count = members.partition_point(|&p| p <= x) as u64;
            let total = universe.partition_point(|&p| p <= x) as u64;
            if total > 0 {
                sup = sup.max(fraction(count, total));
            }
            cps.push(Checkpoint { x, count, total });
        }
        let count = members.len() as u64;
        let total = universe.len() as u64;
        let empirical = fraction(count, total);
        DensityReport {
            count,
            total,
            running_sup: sup.max(empirical.clone()),
            empirical,
            checkpoints: cps,
        }
    }

    /// Report for `count` hits out of `total` trials with no grid.
    pub fn from_counts(count: u64, total: u64, checkpoints: Vec<Checkpoint>) -> Self {
        let empirical = fraction(count, total);
        let sup = checkpoints
            .iter()
            .filter(|c| c.total > 0)
            .map(|c| fraction(c.count, c.total))
            .fold(empirical.clone(), BigRational::max);
        DensityReport {
            count,
            total,
            empirical,
            running_sup: sup,
            checkpoints,
        }
    }
}

/// Powers of ten from 100 below `cutoff`, then `cutoff` itself.
pub fn checkpoint_grid(cutoff: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut x = 100u64;
    while x < cutoff {
        out.push(x);
        x = x.saturating_mul(10);
    }
    out.push(cutoff);
    out
}

/// Density of `s` among all primes `<= s.cutoff()`.
pub fn empirical_upper_density(s: &PrimeSet, checkpoints: &[u64]) -> Result<DensityReport, DensityError> {
    if checkpoints.last() != Some(&s.cutoff) || checkpoints.windows(2).any(|w| w[0] > w[1]) {
        return Err(DensityError::BadCheckpoints(s.cutoff));
    }
    let universe = primes_up_to(s.cutoff);
    Ok(DensityReport::over_universe(&s.members, &universe, checkpoints))
}

/// `min(1 - 1/c1, 1 - 1/c2)`: the upper density a set of places must beat.
pub fn threshold(c1: u64, c2: u64) -> Result<BigRational, DensityError> {
    if c1 == 0 || c2 == 0 {
        return Err(DensityError::ZeroComponents);
    }
    let one = BigRational::one();
    let t = |c: u64| &one - BigRational::new(BigInt::one(), BigInt::from(c));
    Ok(t(c1).min(t(c2)))
}

/// `d·(δ - (1 - 1/d))`: density of places of a degree-`d` Galois extension
/// above a set of upper density `δ`. Nonpositive exactly when
/// `δ <= 1 - 1/d`.
pub fn lift_density(delta: &BigRational, d: u64) -> Result<BigRational, DensityError> {
    if d == 0 {
        return Err(DensityError::ZeroComponents);
    }
    if *delta < BigRational::zero() || *delta > BigRational::one() {
        return Err(DensityError::OutOfRange(ratio::format(delta)));
    }
    let d_q = BigRational::from_integer(BigInt::from(d));
    let slack = BigRational::one() - d_q.recip();
    Ok(d_q * (delta - slack))
}
