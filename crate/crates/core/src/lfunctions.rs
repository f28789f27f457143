//! Dirichlet L-function special values and the Z functional.
//!
//! L(χ,0) comes from the finite character sum (exact for quadratic χ);
//! L'(χ,0) from the log-Gamma closed form; an Euler-Maclaurin Hurwitz zeta
//! evaluator provides a fully independent oracle for both. The value at
//! s = 1 for quadratic characters is reached through the functional-equation
//! bridge and cross-checked against a direct evaluation near s = 1.

use std::sync::Arc;

use num::complex::Complex64;
use num::{BigInt, BigRational, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::gcd_u64;
use crate::characters::{all_characters_mod, DirichletCharacter};
use crate::classfn::ClassFunction;
use crate::cyclotomic::rational_to_f64;

/// Character sums are capped here; every desk-scale target is far below.
pub const MAX_CONDUCTOR: u64 = 100_000;

/// Euler's constant. Pinned against a log-Gamma finite difference in tests.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LFunctionError {
    #[error("the trivial character is handled by the zeta convention, not by L-value routines")]
    TrivialCharacter,
    #[error("even character: L(χ,0) = 0, the logarithmic derivative at 0 does not exist")]
    EvenCharacter,
    #[error("character must be primitive")]
    NotPrimitive,
    #[error("character must be quadratic")]
    NotQuadratic,
    #[error("conductor {0} exceeds the evaluation cap {MAX_CONDUCTOR}")]
    ConductorTooLarge(u64),
    #[error("argument outside the supported domain")]
    DomainError,
    #[error("class function has an even nontrivial character component; Z is undefined on it")]
    NotCMZero,
}

/// Convention for the Z functional on the trivial character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Z(1,0) = -log 2π.
    #[default]
    Paper,
    /// Z(1,0) = +log 2π, the raw ratio ζ'(0)/ζ(0).
    Analytic,
}

impl std::fmt::Display for Convention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Convention::Paper => write!(f, "paper"),
            Convention::Analytic => write!(f, "analytic"),
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(Convention::Paper),
            "analytic" => Ok(Convention::Analytic),
            other => Err(format!("unknown convention `{other}`")),
        }
    }
}

// ---------------------------------------------------------------------------
// log-Gamma (Lanczos, g = 607/128, 15 terms)
// ---------------------------------------------------------------------------

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_87e-4,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -0.210_264_441_724_104_88e-3,
    0.217_439_618_115_212_64e-3,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_274e-5,
    -0.261_908_384_015_814_09e-4,
    0.368_991_826_595_316_23e-5,
];

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires a positive argument");
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        let s = (std::f64::consts::PI * x).sin();
        return (std::f64::consts::PI / s).ln() - ln_gamma(1.0 - x);
    }
    let mut acc = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x - 1.0 + k as f64);
    }
    let t = x + LANCZOS_G - 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x - 0.5) * t.ln() - t + acc.ln()
}

// ---------------------------------------------------------------------------
// Euler-Maclaurin Hurwitz zeta (independent oracle)
// ---------------------------------------------------------------------------

const BERNOULLI_2J: [f64; 11] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
];

/// ζ(s, x) by Euler-Maclaurin for real s ≠ 1, x > 0. Shared core; the
/// public oracle below restricts the domain per its contract.
pub fn hurwitz_zeta_em(s: f64, x: f64) -> f64 {
    assert!(x > 0.0 && s != 1.0);
    let n = 32usize;
    let mut sum = KahanSum::new();
    for k in 0..n {
        sum.add((x + k as f64).powf(-s));
    }
    let xn = x + n as f64;
    sum.add(xn.powf(1.0 - s) / (s - 1.0));
    sum.add(0.5 * xn.powf(-s));
    // Σ_j B_2j/(2j)! · s(s+1)…(s+2j-2) · (x+N)^{-s-2j+1}
    let mut rising = s; // (s)_1
    let mut fact = 2.0; // (2j)!
    for (j, b) in BERNOULLI_2J.iter().enumerate() {
        let term = b / fact * rising * xn.powf(-s - 2.0 * j as f64 - 1.0);
        sum.add(term);
        // update rising factorial to (s)_{2j+1} and factorial to (2j+2)!
        let m = 2.0 * (j as f64 + 1.0);
        rising *= (s + m - 1.0) * (s + m);
        fact *= (m + 1.0) * (m + 2.0);
    }
    sum.value()
}

/// The test oracle contract: |s| ≤ ½ and 0 < x ≤ 1.
pub fn hurwitz_zeta_oracle(s: f64, x: f64) -> Result<f64, LFunctionError> {
    let in_domain = s.abs() <= 0.5 && x > 0.0 && x <= 1.0;
    if !in_domain {
        return Err(LFunctionError::DomainError);
    }
    Ok(hurwitz_zeta_em(s, x))
}

/// ζ'(0, x) by central differences of the Euler-Maclaurin evaluator with one
/// Richardson step; independent of the log-Gamma closed form.
pub fn hurwitz_zeta_deriv0_em(x: f64) -> f64 {
    let diff = |h: f64| (hurwitz_zeta_em(h, x) - hurwitz_zeta_em(-h, x)) / (2.0 * h);
    let h = 1e-4;
    let d1 = diff(h);
    let d2 = diff(h / 2.0);
    (4.0 * d2 - d1) / 3.0
}

/// Riemann ζ(s) for s < 1/2 via the accelerated alternating series at 1-s
/// and the functional equation. A second route for the Euler-Maclaurin
/// evaluator that shares none of its machinery with it; no zeta constants
/// are hardcoded.
pub fn riemann_zeta_via_functional_equation(s: f64) -> f64 {
    assert!(s < 0.5);
    let t = 1.0 - s; // > 0.5, where the eta series converges
    let eta = eta_alternating(t);
    let zeta_t = eta / (1.0 - 2f64.powf(1.0 - t));
    let pi = std::f64::consts::PI;
    let gamma_t = ln_gamma(t).exp();
    2f64.powf(s) * pi.powf(s - 1.0) * (pi * s / 2.0).sin() * gamma_t * zeta_t
}

/// η(s) = Σ (-1)^k (k+1)^{-s}, accelerated (Cohen-Rodriguez Villegas-Zagier).
pub fn eta_alternating(s: f64) -> f64 {
    let n = 44usize;
    let mut d = (3.0 + 8f64.sqrt()).powi(n as i32);
    d = (d + 1.0 / d) / 2.0;
    let mut b = -1.0;
    let mut c = -d;
    let mut sum = 0.0;
    for k in 0..n {
        c = b - c;
        sum += c * ((k + 1) as f64).powf(-s);
        let kf = k as f64;
        let nf = n as f64;
        b *= (kf + nf) * (kf - nf) / ((kf + 0.5) * (kf + 1.0));
    }
    sum / d
}

// ---------------------------------------------------------------------------
// L-values
// ---------------------------------------------------------------------------

/// L(χ,0) for a primitive odd nontrivial character: -(1/f) Σ a·χ(a).
/// Exact rational for quadratic χ.
#[derive(Debug, Clone, PartialEq)]
pub struct LZeroValue {
    pub complex: Complex64,
    pub exact: Option<BigRational>,
}

fn guard_character(chi: &DirichletCharacter) -> Result<(), LFunctionError> {
    if chi.is_trivial() {
        return Err(LFunctionError::TrivialCharacter);
    }
    if !chi.is_primitive() {
        return Err(LFunctionError::NotPrimitive);
    }
    if chi.modulus() > MAX_CONDUCTOR {
        return Err(LFunctionError::ConductorTooLarge(chi.modulus()));
    }
    Ok(())
}

pub fn l_at_zero(chi: &DirichletCharacter) -> Result<LZeroValue, LFunctionError> {
    guard_character(chi)?;
    if !chi.is_odd() {
        return Err(LFunctionError::EvenCharacter);
    }
    let f = chi.modulus();
    if chi.is_quadratic() {
        let mut sum = BigInt::zero();
        for a in 1..f {
            match chi.quadratic_value(a) {
                1 => sum += BigInt::from(a),
                -1 => sum -= BigInt::from(a),
                _ => {}
            }
        }
        let exact = -BigRational::new(sum, BigInt::from(f));
        let complex = Complex64::new(rational_to_f64(&exact), 0.0);
        Ok(LZeroValue {
            complex,
            exact: Some(exact),
        })
    } else {
        let mut re = KahanSum::new();
        let mut im = KahanSum::new();
        for a in 1..f {
            if gcd_u64(a, f) == 1 {
                let v = chi.value(a) * (a as f64);
                re.add(v.re);
                im.add(v.im);
            }
        }
        let complex = Complex64::new(-re.value() / f as f64, -im.value() / f as f64);
        Ok(LZeroValue {
            complex,
            exact: None,
        })
    }
}

/// L'(χ,0) = -log f · L(χ,0) + Σ_a χ(a)·logΓ(a/f), for primitive nontrivial
/// χ of either parity.
pub fn l_prime_at_zero(chi: &DirichletCharacter) -> Result<Complex64, LFunctionError> {
    guard_character(chi)?;
    let f = chi.modulus();
    let l0 = if chi.is_odd() {
        l_at_zero(chi)?.complex
    } else {
        Complex64::new(0.0, 0.0)
    };
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for a in 1..f {
        if gcd_u64(a, f) == 1 {
            let v = chi.value(a) * ln_gamma(a as f64 / f as f64);
            re.add(v.re);
            im.add(v.im);
        }
    }
    let sum = Complex64::new(re.value(), im.value());
    Ok(-(f as f64).ln() * l0 + sum)
}

/// Fully Euler-Maclaurin route for L'(χ,0) (and L(χ,0) along the way),
/// independent of the log-Gamma closed form. Test oracle.
pub fn l_prime_at_zero_oracle(chi: &DirichletCharacter) -> Result<Complex64, LFunctionError> {
    guard_character(chi)?;
    let f = chi.modulus();
    let mut l0 = Complex64::new(0.0, 0.0);
    let mut dsum = Complex64::new(0.0, 0.0);
    for a in 1..f {
        if gcd_u64(a, f) == 1 {
            let x = a as f64 / f as f64;
            l0 += chi.value(a) * hurwitz_zeta_em(0.0, x);
            dsum += chi.value(a) * hurwitz_zeta_deriv0_em(x);
        }
    }
    Ok(-(f as f64).ln() * l0 + dsum)
}

/// Z(χ,0) = L'(χ,0)/L(χ,0) for odd primitive nontrivial χ.
pub fn log_derivative_at_zero(chi: &DirichletCharacter) -> Result<Complex64, LFunctionError> {
    let l0 = l_at_zero(chi).map_err(|e| match e {
        LFunctionError::EvenCharacter => LFunctionError::EvenCharacter,
        other => other,
    })?;
    let lp = l_prime_at_zero(chi)?;
    Ok(lp / l0.complex)
}

/// L'/L(χ,1) for an odd primitive quadratic character, through the
/// functional-equation bridge:
/// L'/L(χ,1) = -L'/L(χ,0) - log(f/π) + γ + log 2.
pub fn log_derivative_at_one(chi: &DirichletCharacter) -> Result<f64, LFunctionError> {
    if !chi.is_quadratic() {
        return Err(LFunctionError::NotQuadratic);
    }
    let z0 = log_derivative_at_zero(chi)?;
    let f = chi.modulus() as f64;
    Ok(-z0.re - (f / std::f64::consts::PI).ln() + EULER_GAMMA + 2f64.ln())
}

/// Direct route for L'/L(χ,1): Euler-Maclaurin evaluation of
/// L(s,χ) = f^{-s} Σ χ(a) ζ(s, a/f) near s = 1, log-differentiated by
/// central differences with one Richardson step. Test oracle.
pub fn log_derivative_at_one_direct(chi: &DirichletCharacter) -> Result<f64, LFunctionError> {
    if !chi.is_quadratic() {
        return Err(LFunctionError::NotQuadratic);
    }
    guard_character(chi)?;
    if !chi.is_odd() {
        return Err(LFunctionError::EvenCharacter);
    }
    let f = chi.modulus();
    let l = |s: f64| -> f64 {
        let mut sum = KahanSum::new();
        for a in 1..f {
            match chi.quadratic_value(a) {
                1 => sum.add(hurwitz_zeta_em(s, a as f64 / f as f64)),
                -1 => sum.add(-hurwitz_zeta_em(s, a as f64 / f as f64)),
                _ => {}
            }
        }
        (f as f64).powf(-s) * sum.value()
    };
    let logl = |s: f64| {
        let v = l(s);
        assert!(v > 0.0, "L(s,χ) must be positive near s = 1 for real χ");
        v.ln()
    };
    let diff = |h: f64| (logl(1.0 + h) - logl(1.0 - h)) / (2.0 * h);
    let h = 1e-3;
    let d1 = diff(h);
    let d2 = diff(h / 2.0);
    Ok((4.0 * d2 - d1) / 3.0)
}

/// Everything this crate knows about one character's special values.
#[derive(Debug, Clone, Serialize)]
pub struct LValueRecord {
    pub conductor: u64,
    pub order: u64,
    pub odd: bool,
    pub l_zero: (f64, f64),
    pub l_zero_exact: Option<String>,
    pub l_prime_zero: (f64, f64),
    pub log_derivative_zero: Option<(f64, f64)>,
    pub error_estimate: f64,
}

pub fn l_value_record(chi: &DirichletCharacter) -> Result<LValueRecord, LFunctionError> {
    guard_character(chi)?;
    let (l0, exact) = if chi.is_odd() {
        let v = l_at_zero(chi)?;
        (v.complex, v.exact)
    } else {
        (Complex64::new(0.0, 0.0), Some(BigRational::zero()))
    };
    let lp = l_prime_at_zero(chi)?;
    let z = if chi.is_odd() { Some(lp / l0) } else { None };
    Ok(LValueRecord {
        conductor: chi.conductor(),
        order: chi.order(),
        odd: chi.is_odd(),
        l_zero: (l0.re, l0.im),
        l_zero_exact: exact.map(|q| q.to_string()),
        l_prime_zero: (lp.re, lp.im),
        log_derivative_zero: z.map(|v| (v.re, v.im)),
        error_estimate: 1e-12 * (1.0 + lp.norm()) / l0.norm().max(1e-3),
    })
}

// ---------------------------------------------------------------------------
// The Z functional on class functions
// ---------------------------------------------------------------------------

/// Key for cached L-values: the primitive character is identified by its
/// conductor and its position in the deterministic enumeration of characters
/// of that modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LValueKey {
    pub conductor: u64,
    pub char_index: u32,
    pub quantity: String,
    pub precision: String,
    pub version: u32,
}

/// Shared cache of expensive per-character values. The file-backed
/// implementation lives in the CLI; the library only sees this surface.
pub trait LValueCache: Send + Sync {
    fn get(&self, key: &LValueKey) -> Option<(f64, f64)>;
    fn put(&self, key: &LValueKey, value: (f64, f64));
}

fn primitive_index(chi: &DirichletCharacter) -> u32 {
    debug_assert!(chi.is_primitive());
    all_characters_mod(chi.modulus())
        .iter()
        .position(|c| c == chi)
        .expect("character occurs in its own modulus enumeration") as u32
}

/// Evaluates Z on characters and class functions under a fixed convention,
/// optionally through a shared L-value cache.
#[derive(Clone)]
pub struct Evaluator {
    convention: Convention,
    cache: Option<Arc<dyn LValueCache>>,
}

impl std::fmt::Debug for Evaluator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Evaluator")
            .field("convention", &self.convention)
            .field("cached", &self.cache.is_some())
            .finish()
    }
}

impl Evaluator {
    pub fn new(convention: Convention) -> Self {
        Evaluator {
            convention,
            cache: None,
        }
    }

    pub fn with_cache(convention: Convention, cache: Arc<dyn LValueCache>) -> Self {
        Evaluator {
            convention,
            cache: Some(cache),
        }
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Same cache, different convention. Cached values are odd-character
    /// Z-values, which do not depend on the convention point.
    pub fn with_convention(&self, convention: Convention) -> Evaluator {
        Evaluator {
            convention,
            cache: self.cache.clone(),
        }
    }

    /// Z on the trivial character: the convention point.
    pub fn z_trivial(&self) -> f64 {
        let log_2pi = (2.0 * std::f64::consts::PI).ln();
        match self.convention {
            Convention::Paper => -log_2pi,
            Convention::Analytic => log_2pi,
        }
    }

    /// Z(χ,0) for an odd character (any modulus); evaluation happens on the
    /// primitive core and is cached when a cache is attached.
    pub fn z_of_character(&self, chi: &DirichletCharacter) -> Result<Complex64, LFunctionError> {
        let core = chi.primitive_core();
        if core.is_trivial() {
            return Err(LFunctionError::TrivialCharacter);
        }
        if !core.is_odd() {
            return Err(LFunctionError::EvenCharacter);
        }
        if let Some(cache) = &self.cache {
            let key = LValueKey {
                conductor: core.conductor(),
                char_index: primitive_index(&core),
                quantity: "z0".to_string(),
                precision: "f64".to_string(),
                version: crate::EVALUATOR_VERSION,
            };
            if let Some((re, im)) = cache.get(&key) {
                return Ok(Complex64::new(re, im));
            }
            let v = log_derivative_at_zero(&core)?;
            cache.put(&key, (v.re, v.im));
            return Ok(v);
        }
        log_derivative_at_zero(&core)
    }

    /// Z extended linearly to a rational class function in the CM space:
    /// trivial multiplicity times the convention value plus the odd-character
    /// block. Fails exactly when an even nontrivial multiplicity is nonzero.
    pub fn z_functional(&self, f: &ClassFunction) -> Result<f64, LFunctionError> {
        let v = self.z_functional_complex(f)?;
        debug_assert!(v.im.abs() < 1e-9, "Z of a rational class function is real");
        Ok(v.re)
    }

    pub fn z_functional_complex(&self, f: &ClassFunction) -> Result<Complex64, LFunctionError> {
        let dec = f.decompose();
        if !dec.even_nontrivial_vanish() {
            return Err(LFunctionError::NotCMZero);
        }
        let mut total = Complex64::new(0.0, 0.0);
        for m in &dec.entries {
            let chi = dec.character(m.index);
            if chi.is_trivial() {
                total += m.complex * self.z_trivial();
            } else if chi.is_odd() {
                if m.exact.is_zero() {
                    continue;
                }
                total += m.complex * self.z_of_character(chi)?;
            }
        }
        Ok(total)
    }

    /// Per-character Z contributions of a class function, for report tables:
    /// (character index, multiplicity, z-value, multiplicity × z-value).
    pub fn z_contributions(
        &self,
        f: &ClassFunction,
    ) -> Result<Vec<(usize, Complex64, Complex64)>, LFunctionError> {
        let dec = f.decompose();
        if !dec.even_nontrivial_vanish() {
            return Err(LFunctionError::NotCMZero);
        }
        let mut out = Vec::new();
        for m in &dec.entries {
            let chi = dec.character(m.index);
            if chi.is_trivial() {
                out.push((m.index, m.complex, Complex64::new(self.z_trivial(), 0.0)));
            } else if chi.is_odd() {
                out.push((m.index, m.complex, self.z_of_character(chi)?));
            }
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Class-number oracle (brute force over reduced forms)
// ---------------------------------------------------------------------------

/// Number of reduced binary quadratic forms of (negative fundamental)
/// discriminant d: the class number h(d).
pub fn class_number(d: i64) -> u64 {
    assert!(d < 0, "class number oracle expects a negative discriminant");
    let abs_d = d.unsigned_abs() as i64;
    let mut count = 0u64;
    let a_max = ((abs_d as f64) / 3.0).sqrt() as i64 + 1;
    for a in 1..=a_max {
        for b in -a..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            // reduced: -a < b ≤ a < c, or 0 ≤ b ≤ a = c
            if (b > -a && a < c) || (b >= 0 && a == c) {
                count += 1;
            }
        }
    }
    count
}

/// Number of roots of unity in the quadratic order of discriminant d.
pub fn roots_of_unity(d: i64) -> u64 {
    match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

/// The class-number-formula value of L(χ_d, 0): 2h/w, exact.
pub fn l_zero_class_number_formula(d: i64) -> BigRational {
    BigRational::new(
        BigInt::from(2 * class_number(d)),
        BigInt::from(roots_of_unity(d)),
    )
}

// ---------------------------------------------------------------------------

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        KahanSum::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use num::One;

    #[test]
    fn ln_gamma_pinned_by_exact_identities() {
        // Γ(1/2) = sqrt(π)
        assert!((ln_gamma(0.5) - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-14);
        assert!(ln_gamma(1.0).abs() < 1e-14);
        assert!(ln_gamma(2.0).abs() < 1e-14);
        // reflection at 1/4: lnΓ(1/4) + lnΓ(3/4) = ln(π √2)
        let lhs = ln_gamma(0.25) + ln_gamma(0.75);
        let rhs = (std::f64::consts::PI * 2f64.sqrt()).ln();
        assert!((lhs - rhs).abs() < 1e-13);
        // recurrence on a grid of (0,1] points
        for k in 1..=20 {
            let x = k as f64 / 20.0;
            let lhs = ln_gamma(x + 1.0);
            let rhs = ln_gamma(x) + x.ln();
            assert!((lhs - rhs).abs() < 2e-13, "recurrence at {x}");
            // duplication
            let dup = ln_gamma(2.0 * x)
                - (ln_gamma(x) + ln_gamma(x + 0.5) + (2.0 * x - 0.5) * 2f64.ln()
                    - 0.5 * (2.0 * std::f64::consts::PI).ln());
            assert!(dup.abs() < 3e-13, "duplication at {x}");
        }
    }

    #[test]
    fn euler_gamma_from_log_gamma() {
        // ψ(1) = -γ by central differences of lnΓ
        let h = 1e-5;
        let psi1 = (ln_gamma(1.0 + h) - ln_gamma(1.0 - h)) / (2.0 * h);
        assert!((psi1 + EULER_GAMMA).abs() < 1e-9);
    }

    #[test]
    fn hurwitz_zeta_closed_forms() {
        // ζ(0, x) = 1/2 - x
        for x in [0.25, 0.5, 1.0] {
            let v = hurwitz_zeta_oracle(0.0, x).unwrap();
            assert!((v - (0.5 - x)).abs() < 1e-12, "zeta(0,{x})");
        }
        // ζ'(0, 1/2) = lnΓ(1/2) - ½ln 2π = -½ ln 2
        let d = hurwitz_zeta_deriv0_em(0.5);
        assert!((d - (-0.5 * 2f64.ln())).abs() < 1e-9);
        // domain guard
        assert_eq!(
            hurwitz_zeta_oracle(0.8, 0.5),
            Err(LFunctionError::DomainError)
        );
        assert_eq!(
            hurwitz_zeta_oracle(0.1, 1.5),
            Err(LFunctionError::DomainError)
        );
    }

    #[test]
    fn hurwitz_zeta_multiplication_identity() {
        // ζ(s,1/2) = (2^s - 1) ζ(s,1) at s = ±1/2, two routes inside EM
        for s in [-0.5, 0.25, 0.5] {
            let lhs = hurwitz_zeta_em(s, 0.5);
            let rhs = (2f64.powf(s) - 1.0) * hurwitz_zeta_em(s, 1.0);
            assert!((lhs - rhs).abs() < 1e-12, "s = {s}");
        }
    }

    #[test]
    fn riemann_zeta_cross_route() {
        // EM at x = 1 against alternating series + functional equation
        let em = hurwitz_zeta_em(-0.5, 1.0);
        let alt = riemann_zeta_via_functional_equation(-0.5);
        assert!((em - alt).abs() < 1e-9, "em={em} alt={alt}");
        // and the derivative connection: ζ'(0) = -½ ln 2π
        let d = hurwitz_zeta_deriv0_em(1.0);
        assert!((d + 0.5 * (2.0 * std::f64::consts::PI).ln()).abs() < 1e-9);
    }

    #[test]
    fn l_zero_small_discriminants() {
        let chi4 = DirichletCharacter::kronecker(-4).unwrap();
        assert_eq!(l_at_zero(&chi4).unwrap().exact, Some(rat(1, 2)));
        let chi3 = DirichletCharacter::kronecker(-3).unwrap();
        assert_eq!(l_at_zero(&chi3).unwrap().exact, Some(rat(1, 3)));
        let chi20 = DirichletCharacter::kronecker(-20).unwrap();
        // class-number formula: h(-20) = 2, w = 2, so L(0) = 2
        assert_eq!(l_at_zero(&chi20).unwrap().exact, Some(rat(2, 1)));
        assert_eq!(l_zero_class_number_formula(-20), rat(2, 1));
    }

    #[test]
    fn l_zero_contract_errors() {
        let chi5 = DirichletCharacter::kronecker(5).unwrap(); // even quadratic
        assert_eq!(l_at_zero(&chi5), Err(LFunctionError::EvenCharacter));
        // but the derivative is still finite there
        assert!(l_prime_at_zero(&chi5).is_ok());
        let all = all_characters_mod(4);
        let trivial = all.iter().find(|c| c.is_trivial()).unwrap();
        assert_eq!(
            l_at_zero(&trivial.primitive_core()),
            Err(LFunctionError::TrivialCharacter)
        );
    }

    #[test]
    fn class_number_table() {
        // textbook values
        for (d, h) in [
            (-3i64, 1u64),
            (-4, 1),
            (-7, 1),
            (-8, 1),
            (-11, 1),
            (-15, 2),
            (-20, 2),
            (-23, 3),
            (-24, 2),
            (-47, 5),
            (-71, 7),
            (-163, 1),
            (-420, 8),
        ] {
            assert_eq!(class_number(d), h, "h({d})");
        }
    }

    #[test]
    fn l_prime_closed_form_vs_em_oracle() {
        for m in [4u64, 3, 5, 7, 8, 20, 40] {
            for chi in all_characters_mod(m) {
                if chi.is_trivial() || !chi.is_primitive() {
                    continue;
                }
                let closed = l_prime_at_zero(&chi).unwrap();
                let oracle = l_prime_at_zero_oracle(&chi).unwrap();
                assert!(
                    (closed - oracle).norm() < 1e-6,
                    "mod {m}: closed={closed} oracle={oracle}"
                );
            }
        }
    }

    #[test]
    fn conjugate_characters_conjugate_values() {
        for chi in all_characters_mod(5) {
            if chi.is_trivial() {
                continue;
            }
            let v = l_prime_at_zero(&chi).unwrap();
            let w = l_prime_at_zero(&chi.conj()).unwrap();
            assert!((v.conj() - w).norm() < 1e-12);
            if chi.is_odd() {
                let z = log_derivative_at_zero(&chi).unwrap();
                let zc = log_derivative_at_zero(&chi.conj()).unwrap();
                assert!((z.conj() - zc).norm() < 1e-12);
                // value + conjugate value is real
                assert!((z + zc).im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn frozen_log_derivative_constants() {
        // audited against the EM oracle; see the acceptance suite
        let chi4 = DirichletCharacter::kronecker(-4).unwrap();
        let z = log_derivative_at_zero(&chi4).unwrap();
        assert!(z.im.abs() < 1e-15);
        assert!(
            (z.re - 0.783_188_785_413_673_4).abs() < 1e-12,
            "got {}",
            z.re
        );
        let lp = l_prime_at_zero(&chi4).unwrap();
        assert!(
            (lp.re - 0.391_594_392_706_836_7).abs() < 1e-12,
            "got {}",
            lp.re
        );
    }

    #[test]
    fn l_value_records() {
        let chi4 = DirichletCharacter::kronecker(-4).unwrap();
        let rec = l_value_record(&chi4).unwrap();
        assert_eq!(rec.conductor, 4);
        assert!(rec.odd);
        assert_eq!(rec.l_zero_exact.as_deref(), Some("1/2"));
        let z = rec.log_derivative_zero.unwrap();
        assert!((z.0 - FROZEN_TEST_Z4).abs() < 1e-12);
        assert!(rec.error_estimate < 1e-10);

        // even characters carry L(0) = 0, a finite derivative, and no ratio
        let chi5 = DirichletCharacter::kronecker(5).unwrap();
        let rec = l_value_record(&chi5).unwrap();
        assert_eq!(rec.l_zero, (0.0, 0.0));
        assert!(rec.log_derivative_zero.is_none());
        assert!(rec.l_prime_zero.0.is_finite());

        // conjugate characters carry conjugate records
        let quartic = all_characters_mod(5)
            .into_iter()
            .find(|c| c.order() == 4)
            .unwrap();
        let a = l_value_record(&quartic).unwrap();
        let b = l_value_record(&quartic.conj()).unwrap();
        assert!((a.l_zero.0 - b.l_zero.0).abs() < 1e-15);
        assert!((a.l_zero.1 + b.l_zero.1).abs() < 1e-15);
    }

    const FROZEN_TEST_Z4: f64 = 0.783_188_785_413_673_4;

    #[test]
    fn bridge_vs_direct_at_one() {
        for d in [-4i64, -20, -3, -8] {
            let chi = DirichletCharacter::kronecker(d).unwrap();
            let bridge = log_derivative_at_one(&chi).unwrap();
            let direct = log_derivative_at_one_direct(&chi).unwrap();
            assert!(
                (bridge - direct).abs() < 1e-6,
                "d={d}: bridge={bridge} direct={direct}"
            );
        }
        // parity contract
        let chi5 = DirichletCharacter::kronecker(5).unwrap();
        assert_eq!(
            log_derivative_at_one_direct(&chi5),
            Err(LFunctionError::EvenCharacter)
        );
        assert_eq!(
            log_derivative_at_one(&chi5),
            Err(LFunctionError::EvenCharacter)
        );
    }

    #[test]
    fn z_functional_conventions() {
        use crate::field::GaloisCMField;
        use std::sync::Arc;
        let field = Arc::new(GaloisCMField::new(4, &[]).unwrap());
        let one = ClassFunction::constant(field.clone(), BigRational::one());
        let log_2pi = (2.0 * std::f64::consts::PI).ln();
        let paper = Evaluator::new(Convention::Paper);
        assert!((paper.z_functional(&one).unwrap() + log_2pi).abs() < 1e-14);
        let analytic = Evaluator::new(Convention::Analytic);
        assert!((analytic.z_functional(&one).unwrap() - log_2pi).abs() < 1e-14);

        // Q(i), b_{τ,τ}: ½·Z(χ₋₄,0)
        let b = crate::cmtypes::b_tau_rho(
            &field,
            crate::field::GroupElement(1),
            crate::field::GroupElement(1),
        );
        let v = paper.z_functional(&b).unwrap();
        assert!((v - 0.5 * 0.783_188_785_413_673_4).abs() < 1e-10, "got {v}");
    }

    #[test]
    fn z_functional_rejects_non_cm_functions() {
        use crate::field::{GaloisCMField, GroupElement};
        use std::sync::Arc;
        let field = Arc::new(GaloisCMField::new(5, &[]).unwrap());
        let ind = ClassFunction::indicator(field, GroupElement(1));
        let eval = Evaluator::new(Convention::Paper);
        assert_eq!(eval.z_functional(&ind), Err(LFunctionError::NotCMZero));
    }

    #[test]
    fn z_functional_linearity() {
        use crate::field::GaloisCMField;
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        use std::sync::Arc;
        let field = Arc::new(GaloisCMField::new(5, &[]).unwrap());
        let eval = Evaluator::new(Convention::Paper);
        let mut rng = StdRng::seed_from_u64(0x2f);
        // random CM functions: constants plus b-combinations
        for _ in 0..10 {
            let mk = |rng: &mut StdRng| {
                let c = rat(rng.random_range(-5i64..=5), rng.random_range(1i64..=3));
                let s = rat(rng.random_range(-5i64..=5), 1);
                let b = crate::cmtypes::b_tau_rho(
                    &field,
                    crate::field::GroupElement(1),
                    crate::field::GroupElement(2),
                );
                &ClassFunction::constant(field.clone(), c) + &b.scale(&s)
            };
            let f = mk(&mut rng);
            let g = mk(&mut rng);
            let sum = &f + &g;
            let lhs = eval.z_functional(&sum).unwrap();
            let rhs = eval.z_functional(&f).unwrap() + eval.z_functional(&g).unwrap();
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }
}
