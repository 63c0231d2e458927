use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// A root of unity `exp(2πi · exponent / order)` kept in lowest terms, so
/// structural equality is equality of complex numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootOfUnity {
    order: u64,
    exponent: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { order: 1, exponent: 0 };

    /// `ζ_order^exponent`, canonicalized. Panics if `order == 0`.
    pub fn new(order: u64, exponent: i64) -> Self {
        assert!(order > 0, "root of unity of order 0");
        let e = (exponent as i128).rem_euclid(order as i128) as u64;
        Self::reduce(order, e)
    }

    /// The primitive `order`-th root `ζ_order`.
    pub fn primitive(order: u64) -> Self {
        Self::new(order, 1)
    }

    /// `-1`.
    pub fn minus_one() -> Self {
        RootOfUnity { order: 2, exponent: 1 }
    }

    fn reduce(order: u64, exponent: u64) -> Self {
        if exponent == 0 {
            return Self::ONE;
        }
        let g = exponent.gcd(&order);
        RootOfUnity {
            order: order / g,
            exponent: exponent / g,
        }
    }

    /// Exact multiplicative order of the value.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_one(&self) -> bool {
        self.order == 1
    }

    pub fn pow(&self, k: i64) -> Self {
        let w = self.order as i128;
        let e = (self.exponent as i128 * (k as i128 % w)).rem_euclid(w);
        Self::reduce(self.order, e as u64)
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let l = self.order.lcm(&other.order);
        let e = (self.exponent as u128 * (l / self.order) as u128
            + other.exponent as u128 * (l / other.order) as u128)
            % l as u128;
        Self::reduce(l, e as u64)
    }

    /// `Some(±1)` when the value is rational.
    pub fn as_sign(&self) -> Option<i8> {
        match self.order {
            1 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.order {
            1 => write!(f, "1"),
            2 => write!(f, "-1"),
            w => write!(f, "z{}^{}", w, self.exponent),
        }
    }
}

/// Free-function form of [`RootOfUnity::pow`].
pub fn rou_pow(z: RootOfUnity, k: i64) -> RootOfUnity {
    z.pow(k)
}
