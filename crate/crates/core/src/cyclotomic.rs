//! Exact arithmetic in the ring of cyclotomic integers Z[ζ_n].
//!
//! Elements are stored on the power basis 1, ζ, ..., ζ^{φ(n)-1} with
//! arbitrary-precision integer coefficients, reduced modulo the n-th
//! cyclotomic polynomial. Norms are computed exactly as the determinant
//! of the multiplication-by-x matrix, so no floating point enters here.

use std::fmt;

use num::{BigInt, BigRational, One, Zero};

use crate::arith::{divisors, euler_phi};

/// Coefficients of the n-th cyclotomic polynomial, low degree first, monic.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    let mut table: std::collections::BTreeMap<u64, Vec<BigInt>> = std::collections::BTreeMap::new();
    for d in divisors(n) {
        // x^d - 1 divided by the cyclotomic polynomials of all proper divisors
        let mut poly = vec![BigInt::zero(); d as usize + 1];
        poly[0] = -BigInt::one();
        poly[d as usize] = BigInt::one();
        for e in divisors(d) {
            if e < d {
                poly = poly_div_exact(&poly, &table[&e]);
            }
        }
        table.insert(d, poly);
    }
    table.remove(&n).unwrap()
}

fn poly_trim(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.iter().all(|c| c.is_zero()) || b.iter().all(|c| c.is_zero()) {
        return vec![BigInt::zero()];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] += ca * cb;
            }
        }
    }
    out
}

/// Exact division of integer polynomials; panics if the division is not exact.
/// The divisor must be monic (all our divisors are cyclotomic polynomials).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    poly_trim(&mut rem);
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    if rem.len() <= dd {
        assert!(
            rem.iter().all(|c| c.is_zero()),
            "inexact polynomial division"
        );
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (dd..rem.len()).rev() {
        let c = std::mem::replace(&mut rem[k], BigInt::zero());
        if c.is_zero() {
            continue;
        }
        for (j, dc) in den.iter().take(dd).enumerate() {
            let t = &c * dc;
            rem[k - dd + j] -= t;
        }
        quot[k - dd] = c;
    }
    assert!(
        rem.iter().all(|c| c.is_zero()),
        "inexact polynomial division"
    );
    poly_trim(&mut quot);
    quot
}

/// Remainder of an integer polynomial modulo a monic divisor.
fn poly_rem(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem: Vec<BigInt> = num.to_vec();
    for k in (dd..rem.len()).rev() {
        let c = std::mem::replace(&mut rem[k], BigInt::zero());
        if c.is_zero() {
            continue;
        }
        for (j, dc) in den.iter().take(dd).enumerate() {
            let t = &c * dc;
            rem[k - dd + j] -= t;
        }
    }
    rem.truncate(dd.max(1));
    rem
}

/// Fraction-free determinant (Bareiss); exact over the integers.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// An element of Z[ζ_n] on the power basis; always reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicInteger {
    coeffs: Vec<BigInt>,
}

impl CyclotomicInteger {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl fmt::Debug for CyclotomicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicInteger({:?})", self.coeffs)
    }
}

/// The ring Z[ζ_n] with its reduction modulus Φ_n.
#[derive(Clone, Debug)]
pub struct CyclotomicRing {
    n: u64,
    degree: usize,
    modulus: Vec<BigInt>,
}

impl CyclotomicRing {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1);
        let modulus = cyclotomic_polynomial(n);
        let degree = euler_phi(n) as usize;
        debug_assert_eq!(modulus.len(), degree + 1);
        CyclotomicRing { n, degree, modulus }
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    pub fn zero(&self) -> CyclotomicInteger {
        CyclotomicInteger {
            coeffs: vec![BigInt::zero(); self.degree],
        }
    }

    pub fn one(&self) -> CyclotomicInteger {
        self.from_integer(BigInt::one())
    }

    pub fn from_integer(&self, c: BigInt) -> CyclotomicInteger {
        let mut coeffs = vec![BigInt::zero(); self.degree];
        coeffs[0] = c;
        CyclotomicInteger { coeffs }
    }

    /// ζ_n itself. For n = 1 this is the integer 1.
    pub fn zeta(&self) -> CyclotomicInteger {
        self.zeta_power(1)
    }

    /// ζ_n^k, reduced to the power basis.
    pub fn zeta_power(&self, k: u64) -> CyclotomicInteger {
        let k = (k % self.n) as usize;
        let mut raw = vec![BigInt::zero(); k + 1];
        raw[k] = BigInt::one();
        self.reduce(raw)
    }

    /// Build an element from arbitrary-degree coefficients (in powers of ζ_n).
    pub fn from_coeffs(&self, coeffs: Vec<BigInt>) -> CyclotomicInteger {
        self.reduce(coeffs)
    }

    fn reduce(&self, raw: Vec<BigInt>) -> CyclotomicInteger {
        let mut coeffs = poly_rem(&raw, &self.modulus);
        coeffs.resize(self.degree.max(1), BigInt::zero());
        coeffs.truncate(self.degree.max(1));
        CyclotomicInteger { coeffs }
    }

    pub fn add(&self, a: &CyclotomicInteger, b: &CyclotomicInteger) -> CyclotomicInteger {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        CyclotomicInteger { coeffs }
    }

    pub fn sub(&self, a: &CyclotomicInteger, b: &CyclotomicInteger) -> CyclotomicInteger {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
        CyclotomicInteger { coeffs }
    }

    pub fn neg(&self, a: &CyclotomicInteger) -> CyclotomicInteger {
        CyclotomicInteger {
            coeffs: a.coeffs.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, a: &CyclotomicInteger, b: &CyclotomicInteger) -> CyclotomicInteger {
        self.reduce(poly_mul(&a.coeffs, &b.coeffs))
    }

    /// Galois action ζ ↦ ζ^a for a coprime to n.
    pub fn galois(&self, x: &CyclotomicInteger, a: u64) -> CyclotomicInteger {
        let a = a % self.n;
        debug_assert_eq!(crate::arith::gcd_u64(a, self.n), 1);
        let mut raw = vec![BigInt::zero(); self.n as usize];
        for (k, c) in x.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let e = (a as u128 * k as u128 % self.n as u128) as usize;
                raw[e] += c;
            }
        }
        self.reduce(raw)
    }

    /// Field norm N_{Q(ζ_n)/Q}(x), exact: the determinant of multiplication
    /// by x in the regular representation on the power basis.
    pub fn norm(&self, x: &CyclotomicInteger) -> BigInt {
        if x.is_zero() {
            return BigInt::zero();
        }
        let d = self.degree;
        if d == 0 {
            return x.coeffs[0].clone();
        }
        // columns: x * ζ^j, built incrementally
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(d);
        let mut current = x.coeffs.clone();
        cols.push(current.clone());
        for _ in 1..d {
            current = self.shift_by_zeta(&current);
            cols.push(current.clone());
        }
        let mut matrix = vec![vec![BigInt::zero(); d]; d];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..d {
                matrix[i][j] = col[i].clone();
            }
        }
        bareiss_det(matrix)
    }

    /// Multiply a reduced coefficient vector by ζ, staying reduced.
    fn shift_by_zeta(&self, c: &[BigInt]) -> Vec<BigInt> {
        let d = self.degree;
        let mut out = vec![BigInt::zero(); d];
        out[1..d].clone_from_slice(&c[..d - 1]);
        let top = &c[d - 1];
        if !top.is_zero() {
            // ζ^d = -Σ_{k<d} m_k ζ^k for monic modulus m
            for (o, m) in out.iter_mut().zip(&self.modulus) {
                *o -= top * m;
            }
        }
        out
    }

    /// Exact norm by the independent conjugate-product route: the product of
    /// all Galois conjugates must be a rational integer. Used in tests only.
    pub fn norm_by_conjugates(&self, x: &CyclotomicInteger) -> BigInt {
        let mut prod = self.one();
        for a in 1..=self.n {
            if crate::arith::gcd_u64(a, self.n) == 1 {
                prod = self.mul(&prod, &self.galois(x, a));
            }
        }
        for c in prod.coeffs.iter().skip(1) {
            assert!(c.is_zero(), "conjugate product is not rational");
        }
        prod.coeffs[0].clone()
    }
}

/// An exact Q-linear combination of roots of unity of a fixed order,
/// stored on the exponent basis ζ^0, ..., ζ^{d-1} of Q[x]/(x^d - 1).
/// Zero testing reduces modulo Φ_d.
#[derive(Clone, Debug, PartialEq)]
pub struct CycSum {
    order: u64,
    coeffs: Vec<BigRational>,
}

impl CycSum {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1);
        CycSum {
            order,
            coeffs: vec![BigRational::zero(); order as usize],
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// c · ζ_d^k
    pub fn term(order: u64, k: u64, c: BigRational) -> Self {
        let mut s = CycSum::zero(order);
        s.coeffs[(k % order) as usize] += c;
        s
    }

    pub fn from_rational(order: u64, c: BigRational) -> Self {
        CycSum::term(order, 0, c)
    }

    pub fn add_assign(&mut self, other: &CycSum) {
        assert_eq!(self.order, other.order);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn add_term(&mut self, k: u64, c: &BigRational) {
        let idx = (k % self.order) as usize;
        self.coeffs[idx] += c;
    }

    pub fn scale(&self, c: &BigRational) -> CycSum {
        CycSum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiply by ζ_d^k.
    pub fn rotate(&self, k: u64) -> CycSum {
        let d = self.order as usize;
        let k = (k % self.order) as usize;
        let mut coeffs = vec![BigRational::zero(); d];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(i + k) % d] = c.clone();
        }
        CycSum {
            order: self.order,
            coeffs,
        }
    }

    /// Complex conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> CycSum {
        let d = self.order as usize;
        let mut coeffs = vec![BigRational::zero(); d];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(d - i) % d] = c.clone();
        }
        CycSum {
            order: self.order,
            coeffs,
        }
    }

    /// Canonical coordinates modulo Φ_d (length φ(d)).
    fn reduced(&self) -> Vec<BigRational> {
        let phi = cyclotomic_polynomial(self.order);
        let dd = phi.len() - 1;
        let mut rem: Vec<BigRational> = self.coeffs.clone();
        for k in (dd..rem.len()).rev() {
            let c = std::mem::replace(&mut rem[k], BigRational::zero());
            if c.is_zero() {
                continue;
            }
            for (j, dc) in phi.iter().take(dd).enumerate() {
                let t = &c * BigRational::from_integer(dc.clone());
                rem[k - dd + j] -= t;
            }
        }
        rem.truncate(dd.max(1));
        rem
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|c| c.is_zero())
    }

    /// The rational value of the sum, if it reduces to one.
    pub fn as_rational(&self) -> Option<BigRational> {
        let red = self.reduced();
        if red.iter().skip(1).all(|c| c.is_zero()) {
            Some(red[0].clone())
        } else {
            None
        }
    }

    /// Numerical evaluation at ζ_d = e^{2πi/d}.
    pub fn to_complex(&self) -> num::complex::Complex64 {
        let d = self.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = rational_to_f64(c);
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / d;
            re += v * theta.cos();
            im += v * theta.sin();
        }
        num::complex::Complex64::new(re, im)
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    use num::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        // fall back to a scaled division for extreme values
        let num = q.numer().to_f64().unwrap_or(f64::NAN);
        let den = q.denom().to_f64().unwrap_or(f64::NAN);
        num / den
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn poly_i64(p: &[BigInt]) -> Vec<i64> {
        use num::ToPrimitive;
        p.iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn cyclotomic_polynomials_small() {
        assert_eq!(poly_i64(&cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(poly_i64(&cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(poly_i64(&cyclotomic_polynomial(5)), vec![1, 1, 1, 1, 1]);
        assert_eq!(poly_i64(&cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(poly_i64(&cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
        assert_eq!(
            poly_i64(&cyclotomic_polynomial(20)),
            vec![1, 0, -1, 0, 1, 0, -1, 0, 1]
        );
    }

    #[test]
    fn norm_examples() {
        // N(ζ5 - ζ5^2) = 5, by the conjugate-product oracle and by determinant
        let r5 = CyclotomicRing::new(5);
        let x = r5.sub(&r5.zeta_power(1), &r5.zeta_power(2));
        assert_eq!(r5.norm_by_conjugates(&x), BigInt::from(5));
        assert_eq!(r5.norm(&x), BigInt::from(5));

        // N(2i) over Q(ζ4) = Q(i): (2i)(-2i) = 4
        let r4 = CyclotomicRing::new(4);
        let two_i = r4.from_coeffs(vec![BigInt::zero(), BigInt::from(2)]);
        assert_eq!(r4.norm_by_conjugates(&two_i), BigInt::from(4));
        assert_eq!(r4.norm(&two_i), BigInt::from(4));

        // norm of 1 is 1 in any ring
        for n in [3u64, 4, 5, 7, 20] {
            let r = CyclotomicRing::new(n);
            assert_eq!(r.norm(&r.one()), BigInt::one());
        }
    }

    #[test]
    fn norm_of_zero_is_zero() {
        let r = CyclotomicRing::new(5);
        assert_eq!(r.norm(&r.zero()), BigInt::zero());
    }

    #[test]
    fn norm_multiplicative_random() {
        let mut rng = StdRng::seed_from_u64(0x1209);
        for n in [4u64, 5, 7, 20] {
            let r = CyclotomicRing::new(n);
            for _ in 0..100 {
                let a = random_element(&r, &mut rng);
                let b = random_element(&r, &mut rng);
                let na = r.norm(&a);
                let nb = r.norm(&b);
                let nab = r.norm(&r.mul(&a, &b));
                assert_eq!(nab, na * nb);
            }
        }
    }

    #[test]
    fn norm_agrees_with_conjugate_product() {
        let mut rng = StdRng::seed_from_u64(0x5ee3);
        for n in [4u64, 5, 12, 20] {
            let r = CyclotomicRing::new(n);
            for _ in 0..25 {
                let a = random_element(&r, &mut rng);
                if a.is_zero() {
                    continue;
                }
                assert_eq!(r.norm(&a), r.norm_by_conjugates(&a));
            }
        }
    }

    #[test]
    fn galois_respects_multiplication() {
        let r = CyclotomicRing::new(20);
        let mut rng = StdRng::seed_from_u64(7);
        for a in [3u64, 7, 9, 11, 13, 17, 19] {
            let x = random_element(&r, &mut rng);
            let y = random_element(&r, &mut rng);
            let lhs = r.galois(&r.mul(&x, &y), a);
            let rhs = r.mul(&r.galois(&x, a), &r.galois(&y, a));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cycsum_reduction() {
        // 1 + ζ5 + ζ5^2 + ζ5^3 + ζ5^4 = 0
        let mut s = CycSum::zero(5);
        for k in 0..5 {
            s.add_term(k, &BigRational::one());
        }
        assert!(s.is_zero());

        // ζ4 + ζ4^3 = 0
        let mut t = CycSum::zero(4);
        t.add_term(1, &BigRational::one());
        t.add_term(3, &BigRational::one());
        assert!(t.is_zero());

        // ζ4^2 = -1
        let u = CycSum::term(4, 2, BigRational::one());
        assert_eq!(u.as_rational(), Some(-BigRational::one()));

        // ζ4 alone is not rational
        let v = CycSum::term(4, 1, BigRational::one());
        assert_eq!(v.as_rational(), None);
        let z = v.to_complex();
        assert!((z.re - 0.0).abs() < 1e-15 && (z.im - 1.0).abs() < 1e-15);
    }

    fn random_element(r: &CyclotomicRing, rng: &mut StdRng) -> CyclotomicInteger {
        let coeffs: Vec<BigInt> = (0..r.degree())
            .map(|_| BigInt::from(rng.random_range(-3i64..=3)))
            .collect();
        r.from_coeffs(coeffs)
    }
}
