//! Small integer utilities shared across the crate.

use num::Zero;
use num::{BigInt, BigRational};

/// Shorthand for an exact rational.
pub fn rat(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Ascending list of divisors of `n`.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(n: u64) -> Vec<u64> {
    let mut m = n;
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Möbius function.
pub fn moebius(n: u64) -> i64 {
    let mut m = n;
    let mut k = 0;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            k += 1;
        }
        p += 1;
    }
    if m > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn mod_pow(base: u64, exp: u64, modulus: u64) -> u64 {
    let mut result: u128 = 1;
    let mut b = (base % modulus) as u128;
    let mut e = exp;
    let m = modulus as u128;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    result as u64
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(x: &BigInt, p: u64) -> u64 {
    assert!(!x.is_zero(), "valuation of zero is undefined");
    let p = BigInt::from(p);
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let (q, r) = num::Integer::div_rem(&y, &p);
        if r.is_zero() {
            v += 1;
            y = q;
        } else {
            return v;
        }
    }
}

/// Multiplicative inverse mod n, if it exists.
pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (n as i128, (a % n) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(n as i128) as u64)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd_u64(a, b) * b
}

#[allow(unused_imports)]
use num::Integer as _;

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;

    #[test]
    fn phi_matches_definition() {
        for n in 1..200u64 {
            let direct = (1..=n).filter(|&k| gcd_u64(k, n) == 1).count() as u64;
            assert_eq!(euler_phi(n), direct, "phi({n})");
        }
    }

    #[test]
    fn divisors_moebius() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(30), -1);
        assert_eq!(moebius(12), 0);
        // sum over divisors of moebius is the identity indicator
        for n in 1..100u64 {
            let s: i64 = divisors(n).iter().map(|&d| moebius(d)).sum();
            assert_eq!(s, if n == 1 { 1 } else { 0 });
        }
    }

    #[test]
    fn inverse_and_pow() {
        assert_eq!(mod_inverse(3, 20), Some(7));
        assert_eq!(mod_inverse(5, 20), None);
        assert_eq!(mod_pow(2, 10, 1000), 24);
    }

    #[test]
    fn big_valuation() {
        assert_eq!(valuation(&BigInt::from(400), 2), 4);
        assert_eq!(valuation(&BigInt::from(400), 5), 2);
        assert_eq!(valuation(&BigInt::from(-125), 5), 3);
        let one: BigInt = One::one();
        assert_eq!(valuation(&one, 7), 0);
    }
}
