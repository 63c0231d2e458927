use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ModularError;
use crate::arith::{factorize, lcm, mod_pow, primitive_root, rem_euclid_u64};
use crate::exactnum::RootOfUnity;

/// Moduli above this are refused; every table here is dense in `q`.
pub const MAX_MODULUS: u64 = 1_000_000;

/// One cyclic factor of `(Z/qZ)^*`: a residue mod `q` and its order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub residue: u64,
    pub order: u64,
}

/// `x mod q` with `x ≡ r (mod m)` and `x ≡ 1 (mod q/m)`.
fn crt_lift(r: u64, m: u64, q: u64) -> u64 {
    let rest = q / m;
    (0..rest)
        .map(|k| r + k * m)
        .find(|x| x % rest == 1 % rest)
        .expect("coprime moduli")
        % q
}

/// The fixed generator basis: `-1` and `5` on the 2-part when `8 | q`,
/// `-1` when the 2-part is 4, and the least primitive root on each odd
/// prime power, each lifted to be `1` on the other factors.
pub fn generators(q: u64) -> Vec<Generator> {
    let mut out = Vec::new();
    for (p, e) in factorize(q) {
        let pe = p.pow(e);
        if p == 2 {
            if e >= 2 {
                out.push(Generator { residue: crt_lift(pe - 1, pe, q), order: 2 });
            }
            if e >= 3 {
                out.push(Generator { residue: crt_lift(5, pe, q), order: pe / 4 });
            }
        } else {
            let g = primitive_root(pe).expect("odd prime powers have primitive roots");
            out.push(Generator { residue: crt_lift(g, pe, q), order: pe / p * (p - 1) });
        }
    }
    out
}

/// Discrete logarithms of every unit mod `q` over [`generators`], by
/// walking the whole group once.
fn log_table(q: u64, gens: &[Generator]) -> Vec<Option<Vec<u64>>> {
    let mut logs = vec![None; q as usize];
    let mut exps = vec![0u64; gens.len()];
    loop {
        let x = gens
            .iter()
            .zip(&exps)
            .fold(1 % q, |acc, (g, &k)| acc * mod_pow(g.residue, k, q) % q);
        logs[x as usize] = Some(exps.clone());
        let mut i = 0;
        loop {
            if i == gens.len() {
                return logs;
            }
            exps[i] += 1;
            if exps[i] < gens[i].order {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// A Dirichlet character mod `q`, stored as exponents `a_i` so that the
/// `i`-th generator maps to `ζ_{n_i}^{a_i}`.
#[derive(Clone, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    exponents: Vec<u64>,
    order: u64,
    values: Arc<[Option<RootOfUnity>]>,
}

#[derive(Serialize, Deserialize)]
struct CharacterRepr {
    modulus: u64,
    exponents: Vec<u64>,
    order: u64,
}

impl Serialize for DirichletCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CharacterRepr {
            modulus: self.modulus,
            exponents: self.exponents.clone(),
            order: self.order,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DirichletCharacter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = CharacterRepr::deserialize(d)?;
        let chi = DirichletCharacter::new(r.modulus, r.exponents).map_err(serde::de::Error::custom)?;
        if chi.order != r.order {
            return Err(serde::de::Error::custom(format!(
                "stated order {} but exponents give {}",
                r.order, chi.order
            )));
        }
        Ok(chi)
    }
}

impl DirichletCharacter {
    pub fn new(modulus: u64, exponents: Vec<u64>) -> Result<Self, ModularError> {
        check_modulus(modulus)?;
        let gens = generators(modulus);
        build(modulus, &gens, &log_table(modulus, &gens), exponents)
    }

    pub fn trivial(modulus: u64) -> Result<Self, ModularError> {
        check_modulus(modulus)?;
        Self::new(modulus, vec![0; generators(modulus).len()])
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// `χ(a)`, or `None` when `gcd(a, q) > 1`.
    pub fn eval(&self, a: i64) -> Option<RootOfUnity> {
        self.values[rem_euclid_u64(a as i128, self.modulus) as usize]
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Smallest `d | q` through which the character factors.
    pub fn conductor(&self) -> u64 {
        let q = self.modulus;
        crate::arith::divisors(q)
            .into_iter()
            .find(|&d| {
                (0..q).all(|u| u % d != 1 % d || self.values[u as usize].is_none_or(|z| z.is_one()))
            })
            .unwrap_or(q)
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DirichletCharacter({self})")
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.exponents.iter().map(u64::to_string).collect();
        write!(f, "chi mod {} [{}] of order {}", self.modulus, e.join(","), self.order)
    }
}

fn check_modulus(q: u64) -> Result<(), ModularError> {
    if q == 0 || q > MAX_MODULUS {
        Err(ModularError::BadModulus(q))
    } else {
        Ok(())
    }
}

fn build(
    modulus: u64,
    gens: &[Generator],
    logs: &[Option<Vec<u64>>],
    exponents: Vec<u64>,
) -> Result<DirichletCharacter, ModularError> {
    if exponents.len() != gens.len() || exponents.iter().zip(gens).any(|(&a, g)| a >= g.order) {
        return Err(ModularError::BadExponents(modulus));
    }
    let n = gens.iter().fold(1, |acc, g| lcm(acc, g.order));
    let order = gens
        .iter()
        .zip(&exponents)
        .fold(1, |acc, (g, &a)| lcm(acc, g.order / num_integer::gcd(a, g.order)));
    let values = logs
        .iter()
        .map(|log| {
            log.as_ref().map(|log| {
                let e = gens
                    .iter()
                    .zip(&exponents)
                    .zip(log)
                    .fold(0u64, |acc, ((g, &a), &l)| (acc + a * l % g.order * (n / g.order)) % n);
                RootOfUnity::new(n, e as i64)
            })
        })
        .collect();
    Ok(DirichletCharacter { modulus, exponents, order, values })
}

/// All `φ(q)` characters mod `q`, exponent vectors in lexicographic order
/// with the first generator varying fastest.
pub fn enumerate_characters(q: u64) -> Result<Vec<DirichletCharacter>, ModularError> {
    check_modulus(q)?;
    let gens = generators(q);
    let logs = log_table(q, &gens);
    let mut out = Vec::new();
    let mut exps = vec![0u64; gens.len()];
    loop {
        out.push(build(q, &gens, &logs, exps.clone())?);
        let mut i = 0;
        loop {
            if i == gens.len() {
                return Ok(out);
            }
            exps[i] += 1;
            if exps[i] < gens[i].order {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// Characters mod `q` whose conductor is `q`.
pub fn primitive_characters(q: u64) -> Result<Vec<DirichletCharacter>, ModularError> {
    Ok(enumerate_characters(q)?.into_iter().filter(|c| c.is_primitive()).collect())
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i64, n: u64) -> i8 {
    assert!(n % 2 == 1, "jacobi needs an odd modulus");
    let mut a = rem_euclid_u64(a as i128, n);
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Kronecker symbol `(D/n)` for a discriminant `D ≡ 0, 1 (mod 4)` and
/// `n >= 1`.
pub fn kronecker(d: i64, n: u64) -> i8 {
    let mut n = n;
    let mut out = 1i8;
    while n.is_multiple_of(2) {
        n /= 2;
        out *= match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    out * jacobi(d, n)
}

/// Fundamental discriminant of `Q(√d)` for squarefree `d ≠ 0, 1`.
pub fn fundamental_discriminant(d: i64) -> i64 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

/// The character `n ↦ (D/n)` mod `|D|`, `D` the fundamental discriminant of
/// `d`; at odd primes `p ∤ d` it equals `legendre(d, p)`.
pub fn quadratic_character(d: i64) -> Result<DirichletCharacter, ModularError> {
    if d == 0 || d == 1 || !crate::arith::is_squarefree(d) {
        return Err(ModularError::NotSquarefree(d));
    }
    let disc = fundamental_discriminant(d);
    let q = disc.unsigned_abs();
    enumerate_characters(q)?
        .into_iter()
        .find(|chi| {
            (1..q).all(|u| match chi.eval(u as i64) {
                None => kronecker(disc, u) == 0,
                Some(z) => z.as_sign() == Some(kronecker(disc, u)),
            })
        })
        .ok_or(ModularError::BadModulus(q))
}
