use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exactnum::QPoly;

/// Dense square matrix over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    n: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(n: usize) -> Self {
        RationalMatrix {
            n,
            data: vec![BigRational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    /// Build from rows; `None` if the rows do not form a square matrix.
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(RationalMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Option<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| BigRational::from_integer(BigInt::from(x)))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn diag(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = BigRational::from_integer(e.into());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * &other.data[k * n + j];
                }
            }
        }
        out
    }

    fn add_scaled_identity(&self, c: &BigRational) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.n + i] += c;
        }
        out
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut acc = Self::identity(self.n);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.n, other.n);
        let size = n * m;
        let mut out = Self::zeros(size);
        for i in 0..n {
            for j in 0..n {
                let a = &self.data[i * n + j];
                if a.is_zero() {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out.data[(i * m + k) * size + j * m + l] = a * &other.data[k * m + l];
                    }
                }
            }
        }
        out
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let p = (col..n).find(|&r| !a.data[r * n + col].is_zero())?;
            if p != col {
                for j in 0..n {
                    a.data.swap(p * n + j, col * n + j);
                    inv.data.swap(p * n + j, col * n + j);
                }
            }
            let piv = a.data[col * n + col].recip();
            for j in 0..n {
                a.data[col * n + j] = &a.data[col * n + j] * &piv;
                inv.data[col * n + j] = &inv.data[col * n + j] * &piv;
            }
            for r in 0..n {
                if r == col || a.data[r * n + col].is_zero() {
                    continue;
                }
                let f = a.data[r * n + col].clone();
                for j in 0..n {
                    let t = &f * &a.data[col * n + j];
                    a.data[r * n + j] -= t;
                    let t = &f * &inv.data[col * n + j];
                    inv.data[r * n + j] -= t;
                }
            }
        }
        Some(inv)
    }

    /// `det(xI - A)` by fraction-free (Bareiss) elimination over `Q[x]`.
    pub fn charpoly(&self) -> QPoly {
        let n = self.n;
        if n == 0 {
            return QPoly::one();
        }
        let mut m: Vec<QPoly> = self
            .data
            .iter()
            .enumerate()
            .map(|(idx, a)| {
                let c = QPoly::constant(-a.clone());
                if idx / n == idx % n {
                    &c + &QPoly::x()
                } else {
                    c
                }
            })
            .collect();
        let mut prev = QPoly::one();
        let mut negate = false;
        for k in 0..n - 1 {
            if m[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !m[r * n + k].is_zero()) else {
                    return QPoly::zero();
                };
                for j in 0..n {
                    m.swap(k * n + j, p * n + j);
                }
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[i * n + j] * &m[k * n + k]) - &(&m[i * n + k] * &m[k * n + j]);
                    m[i * n + j] = num.exact_div(&prev).expect("Bareiss division is exact");
                }
            }
            prev = m[k * n + k].clone();
        }
        let det = m[n * n - 1].clone();
        if negate {
            -&det
        } else {
            det
        }
    }

    pub fn det(&self) -> BigRational {
        let cp = self.charpoly();
        let c0 = cp.coeff(0);
        if self.n.is_multiple_of(2) {
            c0
        } else {
            -c0
        }
    }

    /// `p(A)` by Horner's rule.
    pub fn eval_poly(&self, p: &QPoly) -> Self {
        p.coeffs()
            .iter()
            .rev()
            .fold(Self::zeros(self.n), |acc, c| acc.mul(self).add_scaled_identity(c))
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let r: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
                format!("[{}]", r.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}
