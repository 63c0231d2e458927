use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::table::EigenvalueTable;
use super::ModularError;
use crate::arith::{is_squarefree, mod_pow, primes_up_to, rem_euclid_u64};

/// Trial division bound when computing the radical of `6·(4a³ + 27b²)`.
const RADICAL_TRIAL_BOUND: u64 = 1_000_000;

/// `y² = x³ + ax + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EllipticCurve {
    a: i64,
    b: i64,
}

impl EllipticCurve {
    pub fn new(a: i64, b: i64) -> Result<Self, ModularError> {
        let c = EllipticCurve { a, b };
        if c.disc_core().is_zero() {
            return Err(ModularError::SingularCurve(a, b));
        }
        Ok(c)
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    /// `4a³ + 27b²`.
    pub fn disc_core(&self) -> BigInt {
        let a = BigInt::from(self.a);
        let b = BigInt::from(self.b);
        BigInt::from(4) * &a * &a * &a + BigInt::from(27) * &b * &b
    }

    /// Whether `p` divides `6·(4a³ + 27b²)`.
    pub fn is_bad_prime(&self, p: u64) -> bool {
        p == 2 || p == 3 || (self.disc_core() % BigInt::from(p)).is_zero()
    }

    /// Product of the primes dividing `6·(4a³ + 27b²)`. A cofactor left
    /// after trial division to `10^6` is multiplied in whole.
    pub fn level_hint(&self) -> BigUint {
        let mut rest = (BigInt::from(6) * self.disc_core()).abs().to_biguint().expect("abs");
        let mut rad = BigUint::from(1u32);
        let mut d = 2u64;
        while d <= RADICAL_TRIAL_BOUND && BigUint::from(d) * BigUint::from(d) <= rest {
            if (&rest % d).is_zero() {
                rad *= d;
                while (&rest % d).is_zero() {
                    rest /= d;
                }
            }
            d += 1;
        }
        if rest > BigUint::from(1u32) {
            rad *= rest;
        }
        rad
    }

    pub fn label(&self) -> String {
        format!("E[{},{}]", self.a, self.b)
    }

    /// `a_p = -Σ_x (x³+ax+b | p)` from a table of quadratic residues.
    pub fn ap(&self, p: u64) -> i64 {
        let mut chi = vec![-1i8; p as usize];
        chi[0] = 0;
        for x in 1..=p / 2 {
            chi[(x * x % p) as usize] = 1;
        }
        let a = rem_euclid_u64(self.a as i128, p);
        let b = rem_euclid_u64(self.b as i128, p);
        let mut sum = 0i64;
        for x in 0..p {
            let v = ((x * x % p) * x % p + a * x % p + b) % p;
            sum += chi[v as usize] as i64;
        }
        -sum
    }
}

/// Legendre symbol by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> i8 {
    let r = rem_euclid_u64(a as i128, p);
    if r == 0 {
        return 0;
    }
    if mod_pow(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// `(a·d², b·d³)`, the twist by the quadratic character of `d`.
pub fn quadratic_twist(e: &EllipticCurve, d: i64) -> Result<EllipticCurve, ModularError> {
    if !is_squarefree(d) {
        return Err(ModularError::NotSquarefree(d));
    }
    let overflow = || ModularError::CoefficientOverflow;
    let a = e.a.checked_mul(d.checked_mul(d).ok_or_else(overflow)?).ok_or_else(overflow)?;
    let d3 = d.checked_mul(d).and_then(|x| x.checked_mul(d)).ok_or_else(overflow)?;
    let b = e.b.checked_mul(d3).ok_or_else(overflow)?;
    EllipticCurve::new(a, b)
}

fn good_primes(e: &EllipticCurve, max_prime: u64) -> Vec<u64> {
    primes_up_to(max_prime)
        .into_iter()
        .filter(|&p| !e.is_bad_prime(p))
        .collect()
}

fn assemble(e: &EllipticCurve, values: Vec<(u64, i64)>) -> Result<EigenvalueTable, ModularError> {
    let mut entries = BTreeMap::new();
    for (p, ap) in values {
        if (ap as i128) * (ap as i128) > 4 * p as i128 {
            return Err(ModularError::HasseViolation { p, ap: ap.into() });
        }
        entries.insert(p, BigInt::from(ap));
    }
    EigenvalueTable::new(e.label(), e.level_hint(), 2, entries)
}

/// `a_p` for every good prime `p <= max_prime`, computed in parallel on the
/// global rayon pool and merged in prime order.
pub fn ap_table(e: &EllipticCurve, max_prime: u64) -> Result<EigenvalueTable, ModularError> {
    let primes = good_primes(e, max_prime);
    let values: Vec<(u64, i64)> = primes.par_iter().map(|&p| (p, e.ap(p))).collect();
    assemble(e, values)
}

/// [`ap_table`] on a dedicated pool of `threads` workers; `1` runs inline.
pub fn ap_table_with_threads(
    e: &EllipticCurve,
    max_prime: u64,
    threads: usize,
) -> Result<EigenvalueTable, ModularError> {
    if threads <= 1 {
        let values = good_primes(e, max_prime).into_iter().map(|p| (p, e.ap(p))).collect();
        return assemble(e, values);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|err| ModularError::ThreadPool(err.to_string()))?;
    pool.install(|| ap_table(e, max_prime))
}

/// Largest `a_p` magnitude test used by callers that ingest foreign tables.
pub fn within_hasse(p: u64, ap: &BigInt) -> bool {
    ap.abs()
        .to_u64()
        .is_some_and(|a| (a as u128) * (a as u128) <= 4 * p as u128)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Projective point count by brute force over all (x, y).
    fn count_points(e: &EllipticCurve, p: u64) -> u64 {
        let a = rem_euclid_u64(e.a as i128, p);
        let b = rem_euclid_u64(e.b as i128, p);
        let mut n = 1; // point at infinity
        for x in 0..p {
            for y in 0..p {
                if (y * y) % p == (x * x % p * x + a * x + b) % p {
                    n += 1;
                }
            }
        }
        n
    }

    /// The sum written with Euler's criterion directly.
    fn ap_euler(e: &EllipticCurve, p: u64) -> i64 {
        -(0..p as i64)
            .map(|x| legendre(x * x * x + e.a * x + e.b, p) as i64)
            .sum::<i64>()
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(1, 7), 1);
        assert_eq!(legendre(0, 7), 0);
        assert_eq!(legendre(14, 7), 0);
        // squares mod 7 are {1, 2, 4}
        assert_eq!(legendre(2, 7), 1);
        assert_eq!(legendre(3, 7), -1);
        assert_eq!(legendre(-1, 7), -1);
        assert_eq!(legendre(-1, 13), 1);
    }

    #[test]
    fn y2_x3_minus_x_at_3() {
        let e = EllipticCurve::new(-1, 0).unwrap();
        assert_eq!(count_points(&e, 3), 4);
        assert_eq!(e.ap(3), 0);
    }

    #[test]
    fn ap_agrees_with_point_counts() {
        for (a, b) in [(1, 1), (-1, 1), (0, -4), (2, 3)] {
            let e = EllipticCurve::new(a, b).unwrap();
            for p in primes_up_to(200).into_iter().skip(2) {
                let brute = p as i64 + 1 - count_points(&e, p) as i64;
                assert_eq!(e.ap(p), brute, "E=({a},{b}) p={p}");
                assert_eq!(e.ap(p), ap_euler(&e, p));
            }
        }
    }

    #[test]
    fn bad_primes_and_level() {
        let e = EllipticCurve::new(1, 1).unwrap();
        assert_eq!(e.disc_core(), BigInt::from(31));
        assert!(e.is_bad_prime(31) && e.is_bad_prime(2) && !e.is_bad_prime(5));
        assert_eq!(e.level_hint(), BigUint::from(6u32 * 31));
        assert_eq!(EllipticCurve::new(0, 0), Err(ModularError::SingularCurve(0, 0)));
    }

    #[test]
    fn twists() {
        let e = EllipticCurve::new(1, 1).unwrap();
        assert_eq!(quadratic_twist(&e, 1).unwrap(), e);
        assert_eq!(quadratic_twist(&e, -1).unwrap(), EllipticCurve::new(1, -1).unwrap());
        assert_eq!(quadratic_twist(&e, 4), Err(ModularError::NotSquarefree(4)));
        let t = quadratic_twist(&e, 5).unwrap();
        for p in primes_up_to(500).into_iter().filter(|&p| !t.is_bad_prime(p)) {
            assert_eq!(t.ap(p), legendre(5, p) as i64 * e.ap(p), "p={p}");
        }
    }

    #[test]
    fn threaded_matches_inline() {
        let e = EllipticCurve::new(-1, 1).unwrap();
        let a = ap_table_with_threads(&e, 2000, 1).unwrap();
        let b = ap_table_with_threads(&e, 2000, 4).unwrap();
        assert_eq!(a, b);
        assert!(a.entries().iter().all(|(p, ap)| within_hasse(*p, ap)));
    }
}
