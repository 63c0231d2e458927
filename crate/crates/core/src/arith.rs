//! Small-integer number theory shared by the other modules: sieving,
//! factoring, totients and modular exponentiation on machine words.

use num_integer::Integer;

/// All primes `<= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs in
/// ascending prime order. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorize(0)");
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = (base % modulus) as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Reduce a signed integer into `0..modulus`.
pub fn rem_euclid_u64(a: i128, modulus: u64) -> u64 {
    a.rem_euclid(modulus as i128) as u64
}

/// Multiplicative order of `a` modulo `m`; `a` must be a unit.
pub fn mult_order(a: u64, m: u64) -> u64 {
    let phi = totient(m);
    divisors(phi)
        .into_iter()
        .find(|&d| mod_pow(a, d, m) == 1)
        .expect("unit has an order dividing phi(m)")
}

/// Smallest positive generator of the cyclic group `(Z/mZ)^*`, if it is cyclic.
pub fn primitive_root(m: u64) -> Option<u64> {
    if m == 1 || m == 2 {
        return Some(1);
    }
    let phi = totient(m);
    (1..m)
        .filter(|a| a.gcd(&m) == 1)
        .find(|&a| mult_order(a, m) == phi)
}

/// Squarefree-ness test on a nonzero signed integer.
pub fn is_squarefree(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    factorize(d.unsigned_abs()).iter().all(|&(_, e)| e == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_small() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_up_to(10_000).len(), 1229);
        assert!(primes_up_to(1).is_empty());
    }

    #[test]
    fn factor_and_totient() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(totient(1), 1);
        assert_eq!(totient(12), 4);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        for n in 1..200u64 {
            let brute = (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64;
            assert_eq!(totient(n), brute, "n={n}");
        }
    }

    #[test]
    fn roots_and_orders() {
        assert_eq!(primitive_root(7), Some(3));
        assert_eq!(primitive_root(25), Some(2));
        assert_eq!(primitive_root(8), None);
        assert_eq!(mult_order(2, 7), 3);
        assert!(is_squarefree(-1));
        assert!(!is_squarefree(12));
    }
}
