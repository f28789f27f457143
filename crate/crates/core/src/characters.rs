//! Dirichlet characters of (Z/n)^× and of the quotient groups G = (Z/n)^×/H.
//!
//! Values are stored exactly as root-of-unity exponents: χ(a) = ζ_d^{k(a)}
//! where d is the order of χ. Conductors, parities, and primitive cores are
//! computed from the exponent table.

use std::collections::BTreeMap;

use num::complex::Complex64;
use thiserror::Error;

use crate::arith::{divisors, gcd_u64, lcm_u64, mod_pow};
use crate::field::GaloisCMField;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("modulus {0} is not supported")]
    BadModulus(u64),
}

/// A Dirichlet character with exact root-of-unity values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    /// unit residue -> k with χ(a) = exp(2πi k / order)
    exponents: BTreeMap<u64, u64>,
    conductor: u64,
    odd: bool,
}

impl DirichletCharacter {
    fn from_exponents(modulus: u64, order: u64, exponents: BTreeMap<u64, u64>) -> Self {
        // normalize to the exact order: divide out the gcd of all exponents
        let mut d = order;
        for &k in exponents.values() {
            d = gcd_u64(d, k);
        }
        let true_order = order / d.max(1);
        let exponents: BTreeMap<u64, u64> = exponents
            .into_iter()
            .map(|(a, k)| (a, (k / d.max(1)) % true_order.max(1)))
            .collect();
        let odd = if modulus <= 2 {
            false
        } else {
            // χ(-1) = ±1, so the exponent is 0 or order/2
            exponents[&(modulus - 1)] != 0
        };
        let conductor = conductor_of(modulus, true_order.max(1), &exponents);
        DirichletCharacter {
            modulus,
            order: true_order.max(1),
            exponents,
            conductor,
            odd,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_odd(&self) -> bool {
        self.odd
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_quadratic(&self) -> bool {
        self.order == 2
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    /// Exponent k with χ(a) = ζ_order^k, or None when gcd(a, modulus) > 1.
    pub fn exponent(&self, a: u64) -> Option<u64> {
        if self.modulus == 1 {
            return Some(0);
        }
        self.exponents.get(&(a % self.modulus)).copied()
    }

    /// Exponent rescaled to a target order (a multiple of the character order).
    pub fn exponent_at_order(&self, a: u64, target: u64) -> Option<u64> {
        debug_assert_eq!(target % self.order, 0);
        self.exponent(a).map(|k| k * (target / self.order))
    }

    pub fn value(&self, a: u64) -> Complex64 {
        match self.exponent(a) {
            None => Complex64::new(0.0, 0.0),
            Some(k) => {
                let theta = 2.0 * std::f64::consts::PI * (k as f64) / (self.order as f64);
                Complex64::new(theta.cos(), theta.sin())
            }
        }
    }

    /// For characters of order ≤ 2: χ(a) in {-1, 0, 1}.
    pub fn quadratic_value(&self, a: u64) -> i8 {
        assert!(self.order <= 2);
        match self.exponent(a) {
            None => 0,
            Some(0) => 1,
            Some(_) => -1,
        }
    }

    pub fn conj(&self) -> DirichletCharacter {
        let exponents = self
            .exponents
            .iter()
            .map(|(&a, &k)| (a, (self.order - k) % self.order))
            .collect();
        DirichletCharacter {
            modulus: self.modulus,
            order: self.order,
            exponents,
            conductor: self.conductor,
            odd: self.odd,
        }
    }

    /// The primitive character of conductor f inducing this one.
    pub fn primitive_core(&self) -> DirichletCharacter {
        if self.is_primitive() {
            return self.clone();
        }
        let f = self.conductor;
        let mut exponents = BTreeMap::new();
        for a in 1..f {
            if gcd_u64(a, f) != 1 {
                continue;
            }
            // lift a to a residue coprime to the full modulus
            let mut lift = a;
            while gcd_u64(lift, self.modulus) != 1 {
                lift += f;
            }
            exponents.insert(a, self.exponents[&(lift % self.modulus)]);
        }
        DirichletCharacter::from_exponents(f, self.order, exponents)
    }

    /// The real character attached to a fundamental discriminant d, via the
    /// Kronecker symbol (d/·). Modulus |d|.
    pub fn kronecker(d: i64) -> Result<DirichletCharacter, CharacterError> {
        if !is_fundamental_discriminant(d) {
            return Err(CharacterError::NotFundamental(d));
        }
        let m = d.unsigned_abs();
        let mut exponents = BTreeMap::new();
        for a in 1..m {
            if gcd_u64(a, m) != 1 {
                continue;
            }
            let v = kronecker_symbol(d, a as i64);
            exponents.insert(a, if v == 1 { 0u64 } else { 1u64 });
        }
        let chi = DirichletCharacter::from_exponents(m, 2, exponents);
        debug_assert_eq!(
            chi.conductor, m,
            "fundamental discriminant characters are primitive"
        );
        Ok(chi)
    }
}

fn conductor_of(modulus: u64, order: u64, exponents: &BTreeMap<u64, u64>) -> u64 {
    'outer: for m in divisors(modulus) {
        // χ factors through (Z/m)^× iff it kills every unit ≡ 1 (mod m)
        for (&a, &k) in exponents {
            if a % m == 1 % m && k % order != 0 {
                continue 'outer;
            }
        }
        return m;
    }
    modulus
}

/// Cyclic decomposition of (Z/n)^×: generators (lifted mod n) and orders.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    modulus: u64,
    generators: Vec<u64>,
    orders: Vec<u64>,
    /// unit -> exponent vector over the generators
    logs: BTreeMap<u64, Vec<u64>>,
}

impl UnitGroup {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1);
        let mut generators = Vec::new();
        let mut orders = Vec::new();
        let mut m = n;
        let mut p = 2u64;
        let mut factors: Vec<(u64, u64)> = Vec::new();
        while p * p <= m {
            if m.is_multiple_of(p) {
                let mut q = 1;
                while m.is_multiple_of(p) {
                    m /= p;
                    q *= p;
                }
                factors.push((p, q));
            }
            p += 1;
        }
        if m > 1 {
            factors.push((m, m));
        }
        for &(p, q) in &factors {
            if p == 2 {
                if q == 2 {
                    continue;
                } else if q == 4 {
                    generators.push(crt_lift(3, q, n));
                    orders.push(2);
                } else {
                    generators.push(crt_lift(q - 1, q, n));
                    orders.push(2);
                    generators.push(crt_lift(5, q, n));
                    orders.push(q / 4);
                }
            } else {
                let phi_q = q - q / p;
                let g = primitive_root(p, q, phi_q);
                generators.push(crt_lift(g, q, n));
                orders.push(phi_q);
            }
        }
        let mut logs = BTreeMap::new();
        // enumerate all products of generator powers
        let total: u64 = orders.iter().product::<u64>().max(1);
        let mut exps = vec![0u64; orders.len()];
        for _ in 0..total {
            let mut val: u128 = 1;
            for (i, &e) in exps.iter().enumerate() {
                val = val * mod_pow(generators[i], e, n) as u128 % n as u128;
            }
            logs.insert(val as u64, exps.clone());
            // increment mixed-radix counter
            for i in 0..exps.len() {
                exps[i] += 1;
                if exps[i] < orders[i] {
                    break;
                }
                exps[i] = 0;
            }
        }
        if orders.is_empty() {
            logs.insert(1 % n.max(1), vec![]);
        }
        debug_assert_eq!(logs.len() as u64, crate::arith::euler_phi(n).max(1));
        UnitGroup {
            modulus: n,
            generators,
            orders,
            logs,
        }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn log(&self, a: u64) -> Option<&Vec<u64>> {
        self.logs.get(&(a % self.modulus))
    }
}

fn crt_lift(g: u64, q: u64, n: u64) -> u64 {
    // x ≡ g (mod q), x ≡ 1 (mod n/q)
    let rest = n / q;
    if rest == 1 {
        return g % n;
    }
    let inv = crate::arith::mod_inverse(rest % q, q).expect("coprime CRT parts");
    // x = rest * t + 1 with rest*t ≡ g-1 (mod q)
    let delta = (g + q - 1) % q;
    let t = (delta as u128 * inv as u128 % q as u128) as u64;
    (rest as u128 * t as u128 + 1) as u64 % n
}

fn primitive_root(p: u64, q: u64, phi_q: u64) -> u64 {
    let prime_divs = crate::arith::prime_factors(phi_q);
    'cand: for g in 2..q {
        if g % p == 0 {
            continue;
        }
        for &d in &prime_divs {
            if mod_pow(g, phi_q / d, q) == 1 {
                continue 'cand;
            }
        }
        return g;
    }
    unreachable!("every odd prime power has a primitive root")
}

/// All characters of (Z/n)^× in a fixed deterministic order (mixed-radix
/// enumeration over the cyclic decomposition).
pub fn all_characters_mod(n: u64) -> Vec<DirichletCharacter> {
    let ug = UnitGroup::new(n);
    let orders = ug.orders().to_vec();
    let big_order = orders.iter().fold(1u64, |acc, &m| lcm_u64(acc, m)).max(1);
    let total: u64 = orders.iter().product::<u64>().max(1);
    let mut out = Vec::with_capacity(total as usize);
    let mut v = vec![0u64; orders.len()];
    for _ in 0..total {
        let mut exponents = BTreeMap::new();
        for (&a, x) in ug.logs.iter() {
            let mut k: u64 = 0;
            for i in 0..orders.len() {
                k = (k + v[i] * x[i] % big_order * (big_order / orders[i])) % big_order;
            }
            exponents.insert(a, k);
        }
        out.push(DirichletCharacter::from_exponents(n, big_order, exponents));
        for i in 0..v.len() {
            v[i] += 1;
            if v[i] < orders[i] {
                break;
            }
            v[i] = 0;
        }
    }
    out
}

/// The characters of G = (Z/n)^×/H: characters of (Z/n)^× trivial on the
/// kernel, in the enumeration order of [`all_characters_mod`].
pub fn field_characters(field: &GaloisCMField) -> Vec<DirichletCharacter> {
    all_characters_mod(field.modulus())
        .into_iter()
        .filter(|chi| field.kernel().iter().all(|&h| chi.exponent(h) == Some(0)))
        .collect()
}

/// lcm of the orders of the characters of G; the exact coefficient field for
/// class-function decompositions is Q(ζ_d) for this d.
pub fn character_order_lcm(chars: &[DirichletCharacter]) -> u64 {
    chars
        .iter()
        .fold(1, |acc, c| lcm_u64(acc, c.order()))
        .max(1)
}

pub fn kronecker_symbol(a: i64, n: i64) -> i64 {
    // standard Kronecker symbol (a/n)
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a;
    let mut n = n;
    let mut result = 1i64;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    // factor out twos from n
    while n % 2 == 0 {
        n /= 2;
        if a % 2 == 0 {
            return 0;
        }
        let am8 = a.rem_euclid(8);
        if am8 == 3 || am8 == 5 {
            result = -result;
        }
    }
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let nm8 = n.rem_euclid(8);
            if nm8 == 3 || nm8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        a = a.rem_euclid(n);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let m4 = d.rem_euclid(4);
    if m4 == 1 {
        is_squarefree(d.unsigned_abs())
    } else if m4 == 0 {
        let q = d / 4;
        let qm4 = q.rem_euclid(4);
        (qm4 == 2 || qm4 == 3) && is_squarefree_part_ok(q)
    } else {
        false
    }
}

fn is_squarefree(n: u64) -> bool {
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p * p) {
            return false;
        }
        if m.is_multiple_of(p) {
            m /= p;
        }
        p += 1;
    }
    true
}

fn is_squarefree_part_ok(q: i64) -> bool {
    is_squarefree(q.unsigned_abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characters_of_gaussian_field() {
        let f = GaloisCMField::new(4, &[]).unwrap();
        let chars = field_characters(&f);
        assert_eq!(chars.len(), 2);
        let trivial = &chars[0];
        assert!(trivial.is_trivial());
        assert_eq!(trivial.conductor(), 1);
        assert!(!trivial.is_odd());
        let chi = &chars[1];
        assert_eq!(chi.conductor(), 4);
        assert!(chi.is_odd());
        assert!(chi.is_quadratic());
        assert_eq!(chi.quadratic_value(1), 1);
        assert_eq!(chi.quadratic_value(3), -1);
    }

    #[test]
    fn characters_mod_5() {
        let chars = all_characters_mod(5);
        assert_eq!(chars.len(), 4);
        let mut orders: Vec<u64> = chars.iter().map(|c| c.order()).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 4, 4]);
        for c in &chars {
            assert_eq!(c.conductor(), if c.is_trivial() { 1 } else { 5 });
            // parity matches the value at -1
            let k = c.exponent(4).unwrap();
            assert_eq!(c.is_odd(), k != 0);
            if c.is_odd() {
                assert_eq!(c.order(), 4, "odd characters mod 5 are quartic");
            }
        }
        // the quadratic character mod 5 is even (Legendre symbol at -1 = +1)
        let quad = chars.iter().find(|c| c.is_quadratic()).unwrap();
        assert!(!quad.is_odd());
    }

    #[test]
    fn biquadratic_conductors() {
        let f = GaloisCMField::new(20, &[9]).unwrap();
        let chars = field_characters(&f);
        assert_eq!(chars.len(), 4);
        let mut conductors: Vec<u64> = chars.iter().map(|c| c.conductor()).collect();
        conductors.sort_unstable();
        assert_eq!(conductors, vec![1, 4, 5, 20]);
        let mut odd: Vec<u64> = chars
            .iter()
            .filter(|c| c.is_odd())
            .map(|c| c.conductor())
            .collect();
        odd.sort_unstable();
        assert_eq!(odd, vec![4, 20]);
    }

    #[test]
    fn primitive_core_of_lifted_character() {
        let f = GaloisCMField::new(20, &[9]).unwrap();
        let chars = field_characters(&f);
        let lifted = chars.iter().find(|c| c.conductor() == 4).unwrap();
        let core = lifted.primitive_core();
        assert_eq!(core.modulus(), 4);
        assert_eq!(core.conductor(), 4);
        assert!(core.is_odd());
        assert_eq!(core.quadratic_value(3), -1);
    }

    #[test]
    fn kronecker_matches_known_values() {
        // (-4/a) is the nontrivial character mod 4
        for (a, v) in [(1i64, 1i64), (3, -1), (5, 1), (7, -1), (2, 0)] {
            assert_eq!(kronecker_symbol(-4, a), v);
        }
        let chi = DirichletCharacter::kronecker(-4).unwrap();
        assert!(chi.is_odd() && chi.conductor() == 4);
        // (-20/a) agrees with the product of the mod-4 and mod-5 characters
        let chi20 = DirichletCharacter::kronecker(-20).unwrap();
        assert_eq!(chi20.conductor(), 20);
        assert!(chi20.is_odd());
        for a in 1..20u64 {
            if gcd_u64(a, 20) == 1 {
                let prod = kronecker_symbol(-4, a as i64) * kronecker_symbol(5, a as i64);
                assert_eq!(chi20.quadratic_value(a) as i64, prod);
            }
        }
        assert!(DirichletCharacter::kronecker(-8).is_ok());
        // -12 = 4·(-3) with -3 ≡ 1 (mod 4): an order discriminant, not fundamental
        assert!(DirichletCharacter::kronecker(-12).is_err());
        assert!(DirichletCharacter::kronecker(-9).is_err());
        assert!(DirichletCharacter::kronecker(5).is_ok());
    }

    #[test]
    fn conjugate_characters() {
        let chars = all_characters_mod(5);
        let quartic = chars.iter().find(|c| c.order() == 4).unwrap();
        let conj = quartic.conj();
        for a in [1u64, 2, 3, 4] {
            let v = quartic.value(a);
            let w = conj.value(a);
            assert!((v.conj() - w).norm() < 1e-15);
        }
    }

    #[test]
    fn unit_group_structure_consistency() {
        for n in [3u64, 4, 5, 7, 8, 12, 15, 16, 20, 21, 24, 36, 40, 100] {
            let ug = UnitGroup::new(n);
            let phi = crate::arith::euler_phi(n);
            assert_eq!(ug.logs.len() as u64, phi, "log table covers units mod {n}");
            let prod: u64 = ug.orders().iter().product::<u64>().max(1);
            assert_eq!(prod, phi);
        }
    }

    #[test]
    fn character_count_and_orthogonality() {
        for n in [4u64, 5, 7, 20, 40] {
            let chars = all_characters_mod(n);
            assert_eq!(chars.len() as u64, crate::arith::euler_phi(n));
            // column orthogonality: sum over characters of χ(a) is 0 for a ≠ 1
            for a in 2..n {
                if gcd_u64(a, n) != 1 {
                    continue;
                }
                let s: Complex64 = chars.iter().map(|c| c.value(a)).sum();
                assert!(s.norm() < 1e-9, "orthogonality fails mod {n} at {a}");
            }
        }
    }
}
