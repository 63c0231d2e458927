//! Elements of cyclotomic fields `Q(ζ_m)` in the power basis.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::QPoly;
use super::rou::RootOfUnity;
use crate::arith::{divisors, totient};

/// The `m`-th cyclotomic polynomial, from `x^m - 1 = ∏_{d | m} Φ_d`.
pub fn cyclotomic_polynomial(m: u64) -> Arc<QPoly> {
    assert!(m > 0, "cyclotomic polynomial of order 0");
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<QPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return Arc::clone(p);
    }
    let mut num = QPoly::monomial(BigRational::one(), m as usize);
    num = &num - &QPoly::one();
    for d in divisors(m) {
        if d < m {
            num = num
                .exact_div(&cyclotomic_polynomial(d))
                .expect("proper cyclotomic factor divides x^m - 1");
        }
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(m, Arc::clone(&p));
    p
}

/// An element of `Q(ζ_order)` as a coefficient vector of length `φ(order)`
/// over `1, ζ, …, ζ^{φ(order)-1}`.
#[derive(Clone, Debug)]
pub struct CyclotomicNumber {
    order: u64,
    coeffs: Vec<BigRational>,
}

impl CyclotomicNumber {
    pub fn zero(order: u64) -> Self {
        CyclotomicNumber {
            order,
            coeffs: vec![BigRational::zero(); totient(order) as usize],
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        CyclotomicNumber {
            order: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// Reduce an arbitrary polynomial in `ζ_order` to canonical form.
    pub fn from_poly(order: u64, p: &QPoly) -> Self {
        assert!(order > 0);
        let phi = cyclotomic_polynomial(order);
        let r = p.rem(&phi);
        let n = totient(order) as usize;
        CyclotomicNumber {
            order,
            coeffs: (0..n).map(|i| r.coeff(i)).collect(),
        }
    }

    /// `ζ_order^k` inside `Q(ζ_order)`.
    pub fn zeta_power(order: u64, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        Self::from_poly(order, &QPoly::monomial(BigRational::one(), e))
    }

    pub fn from_root_of_unity(z: &RootOfUnity) -> Self {
        Self::zeta_power(z.order(), z.exponent() as i64)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        let r = self.retract(1)?;
        Some(r.coeffs[0].clone())
    }

    fn as_poly(&self) -> QPoly {
        QPoly::from_vec(self.coeffs.clone())
    }

    /// Image under `Q(ζ_m) ⊂ Q(ζ_target)`, `ζ_m ↦ ζ_target^{target/m}`.
    /// Panics unless `order` divides `target`.
    pub fn embed(&self, target: u64) -> Self {
        assert!(
            target.is_multiple_of(self.order),
            "cannot embed order {} into order {}",
            self.order,
            target
        );
        if target == self.order {
            return self.clone();
        }
        let step = (target / self.order) as usize;
        Self::from_poly(target, &self.as_poly().compose_power(step))
    }

    /// Express `self` in the subfield `Q(ζ_target)` when it lies there.
    ///
    /// Solves `Σ c_j · embed(ζ_target^j) = self` over `Q` by elimination.
    pub fn retract(&self, target: u64) -> Option<Self> {
        if !self.order.is_multiple_of(target) {
            return None;
        }
        if target == self.order {
            return Some(self.clone());
        }
        let k = totient(target) as usize;
        let n = self.coeffs.len();
        // columns: embedded basis vectors, augmented with self
        let mut rows: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut r: Vec<BigRational> = (0..k)
                    .map(|j| {
                        Self::zeta_power(target, j as i64)
                            .embed(self.order)
                            .coeffs[i]
                            .clone()
                    })
                    .collect();
                r.push(self.coeffs[i].clone());
                r
            })
            .collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..k {
            let Some(p) = (row..n).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(row, p);
            let inv = rows[row][col].recip();
            for x in &mut rows[row][col..=k] {
                *x *= &inv;
            }
            let pivot_row = rows[row].clone();
            for (r, target) in rows.iter_mut().enumerate() {
                if r != row && !target[col].is_zero() {
                    let f = target[col].clone();
                    for (x, y) in target[col..=k].iter_mut().zip(&pivot_row[col..=k]) {
                        *x -= &f * y;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        if rows[row..].iter().any(|r| !r[k].is_zero()) {
            return None;
        }
        let mut coeffs = vec![BigRational::zero(); k];
        for (r, &c) in pivots.iter().enumerate() {
            coeffs[c] = rows[r][k].clone();
        }
        Some(CyclotomicNumber {
            order: target,
            coeffs,
        })
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let l = self.order.lcm(&other.order);
        (self.embed(l), other.embed(l))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        CyclotomicNumber {
            order: a.order,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        Self::from_poly(a.order, &(&a.as_poly() * &b.as_poly()))
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut acc = Self::from_integer(1).embed(self.order);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }
}

/// Equality as complex numbers, decided in `Q(ζ_lcm)`.
pub fn cyclo_eq(x: &CyclotomicNumber, y: &CyclotomicNumber) -> bool {
    let (a, b) = x.common(y);
    a.coeffs == b.coeffs
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        cyclo_eq(self, other)
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                _ => format!("{c}*z{}^{i}", self.order),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(n: i64) -> CyclotomicNumber {
        CyclotomicNumber::from_integer(n)
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), QPoly::from_i64(&[-1, 1]));
        assert_eq!(*cyclotomic_polynomial(4), QPoly::from_i64(&[1, 0, 1]));
        assert_eq!(*cyclotomic_polynomial(6), QPoly::from_i64(&[1, -1, 1]));
        assert_eq!(*cyclotomic_polynomial(12), QPoly::from_i64(&[1, 0, -1, 0, 1]));
        // Φ_105 is the first with a coefficient outside {-1, 0, 1}
        let p = cyclotomic_polynomial(105);
        assert_eq!(p.degree(), Some(48));
        assert!(p.coeffs().iter().any(|c| *c == BigRational::from_integer((-2).into())));
    }

    #[test]
    fn equality_examples() {
        let z3 = CyclotomicNumber::zeta_power(3, 1);
        let sum = int(1).add(&z3).add(&z3.pow(2));
        assert!(cyclo_eq(&sum, &int(0)));
        assert!(cyclo_eq(&z3.embed(6), &CyclotomicNumber::zeta_power(6, 2)));
        assert!(cyclo_eq(&z3, &CyclotomicNumber::zeta_power(6, 2)));
        assert!(!cyclo_eq(
            &CyclotomicNumber::zeta_power(5, 1),
            &CyclotomicNumber::zeta_power(5, 2)
        ));
        // i^2 = -1
        let i = CyclotomicNumber::zeta_power(4, 1);
        assert_eq!(i.mul(&i), int(-1));
    }

    #[test]
    fn retract_detects_subfields() {
        // ζ_8 + ζ_8^7 = √2 is not in Q(ζ_4)
        let z8 = CyclotomicNumber::zeta_power(8, 1);
        let sqrt2 = z8.add(&z8.pow(7));
        assert!(sqrt2.retract(4).is_none());
        assert_eq!(sqrt2.mul(&sqrt2).as_rational(), Some(BigRational::from_integer(2.into())));
        // ζ_8^2 = i lies in Q(ζ_4)
        let i = z8.pow(2).retract(4).unwrap();
        assert_eq!(i.order(), 4);
        assert_eq!(i, CyclotomicNumber::zeta_power(4, 1));
    }

    fn arb_element(order: u64) -> impl Strategy<Value = CyclotomicNumber> {
        let n = totient(order) as usize;
        proptest::collection::vec((-5i64..=5, 1i64..=3), n).prop_map(move |v| {
            let coeffs = v
                .into_iter()
                .map(|(a, b)| BigRational::new(a.into(), b.into()))
                .collect();
            CyclotomicNumber { order, coeffs }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(
            (a, b, c) in prop_oneof![Just(3u64), Just(4), Just(5), Just(8), Just(12)]
                .prop_flat_map(|m| (arb_element(m), arb_element(m), arb_element(m)))
        ) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert!(a.sub(&a).is_zero());
        }

        #[test]
        fn embed_then_retract(
            (a, mult) in prop_oneof![Just(3u64), Just(4), Just(5), Just(6)]
                .prop_flat_map(|m| (arb_element(m), 1u64..=4))
        ) {
            let big = a.order() * mult;
            let e = a.embed(big);
            prop_assert_eq!(e.coeffs().len(), totient(big) as usize);
            let back = e.retract(a.order()).unwrap();
            prop_assert_eq!(back.coeffs(), a.coeffs());
        }
    }
}
