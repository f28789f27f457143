//! Abelian Galois CM fields presented as quotients of (Z/n)^×.
//!
//! A field E ⊂ Q(ζ_n) is cut out by a subgroup H of (Z/n)^× (the kernel of
//! its character group); the Galois group G = (Z/n)^×/H is stored as a list
//! of canonical coset representatives. Complex conjugation is the coset of
//! -1, and the totally real subfield F corresponds to the subgroup generated
//! by H and -1.

use std::collections::{BTreeSet, HashMap};

use num::{BigInt, BigRational, Signed};
use thiserror::Error;

use crate::arith::{euler_phi, gcd_u64};
use crate::cyclotomic::{CyclotomicInteger, CyclotomicRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus must be at least 3, got {0}")]
    BadModulus(u64),
    #[error("generator {0} is not coprime to the modulus {1}")]
    BadGenerator(u64, u64),
    #[error("subgroup contains -1: the fixed field is not a CM field")]
    NotCM,
    #[error("representative {0} is not coprime to the modulus {1}")]
    ForeignElement(u64, u64),
    #[error("the zero element has no norm")]
    ZeroElement,
    #[error("subfield degree {0} does not divide the cyclotomic degree {1}")]
    InvalidSubfieldDegree(usize, usize),
    #[error("norm is not an exact power for the requested subfield degree")]
    NotInSubfield,
}

/// A canonical coset representative in G = (Z/n)^×/H.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(pub u64);

impl GroupElement {
    pub fn rep(&self) -> u64 {
        self.0
    }
}

impl std::fmt::Display for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An abelian CM field E ⊂ Q(ζ_n), immutable after construction.
#[derive(Debug, Clone)]
pub struct GaloisCMField {
    modulus: u64,
    kernel: BTreeSet<u64>,
    elements: Vec<u64>,
    canon: HashMap<u64, u64>,
    conj: u64,
    real_kernel: BTreeSet<u64>,
    ring: CyclotomicRing,
}

impl PartialEq for GaloisCMField {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.kernel == other.kernel
    }
}
impl Eq for GaloisCMField {}

fn units(n: u64) -> Vec<u64> {
    (1..n).filter(|&a| gcd_u64(a, n) == 1).collect()
}

fn subgroup_closure(n: u64, gens: &[u64]) -> BTreeSet<u64> {
    let mut set: BTreeSet<u64> = BTreeSet::new();
    set.insert(1);
    for &g in gens {
        set.insert(g % n);
    }
    // multiplicative fixpoint; the unit groups here are tiny
    loop {
        let mut added = false;
        let members: Vec<u64> = set.iter().copied().collect();
        for &a in &members {
            for &b in &members {
                if set.insert((a as u128 * b as u128 % n as u128) as u64) {
                    added = true;
                }
            }
        }
        if !added {
            return set;
        }
    }
}

impl GaloisCMField {
    /// Build the field model from a modulus and kernel generators.
    pub fn new(modulus: u64, kernel_generators: &[u64]) -> Result<Self, FieldError> {
        if modulus < 3 {
            return Err(FieldError::BadModulus(modulus));
        }
        for &g in kernel_generators {
            if gcd_u64(g % modulus, modulus) != 1 || g % modulus == 0 {
                return Err(FieldError::BadGenerator(g, modulus));
            }
        }
        let kernel = subgroup_closure(modulus, kernel_generators);
        let minus_one = modulus - 1;
        if kernel.contains(&minus_one) {
            return Err(FieldError::NotCM);
        }
        let mut canon: HashMap<u64, u64> = HashMap::new();
        let mut elements: Vec<u64> = Vec::new();
        for u in units(modulus) {
            if canon.contains_key(&u) {
                continue;
            }
            // ascending iteration makes u the least member of its new coset
            let coset: Vec<u64> = kernel
                .iter()
                .map(|&h| (u as u128 * h as u128 % modulus as u128) as u64)
                .collect();
            for c in coset {
                canon.insert(c, u);
            }
            elements.push(u);
        }
        let conj = canon[&minus_one];
        let mut real_gens: Vec<u64> = kernel.iter().copied().collect();
        real_gens.push(minus_one);
        let real_kernel = subgroup_closure(modulus, &real_gens);
        let field = GaloisCMField {
            modulus,
            kernel,
            elements,
            canon,
            conj,
            real_kernel,
            ring: CyclotomicRing::new(modulus),
        };
        debug_assert!(field.order().is_multiple_of(2));
        debug_assert_eq!(field.real_kernel.len(), 2 * field.kernel.len());
        Ok(field)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// |G| = [E : Q] = 2g.
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Half the degree: the number of conjugate pairs of embeddings.
    pub fn g(&self) -> usize {
        self.elements.len() / 2
    }

    pub fn kernel(&self) -> &BTreeSet<u64> {
        &self.kernel
    }

    pub fn real_kernel(&self) -> &BTreeSet<u64> {
        &self.real_kernel
    }

    /// Complex conjugation as an element of G.
    pub fn conjugation(&self) -> GroupElement {
        GroupElement(self.conj)
    }

    /// Canonical representatives of G in ascending order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.elements.iter().map(|&e| GroupElement(e))
    }

    pub fn element_reps(&self) -> &[u64] {
        &self.elements
    }

    /// Map any unit mod n to the canonical representative of its coset.
    pub fn element(&self, a: u64) -> Result<GroupElement, FieldError> {
        let a = a % self.modulus;
        match self.canon.get(&a) {
            Some(&c) => Ok(GroupElement(c)),
            None => Err(FieldError::ForeignElement(a, self.modulus)),
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(1)
    }

    pub fn mul(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        let p = (a.0 as u128 * b.0 as u128 % self.modulus as u128) as u64;
        GroupElement(self.canon[&p])
    }

    pub fn inv(&self, a: GroupElement) -> GroupElement {
        let inv = crate::arith::mod_inverse(a.0, self.modulus)
            .expect("canonical representatives are units");
        GroupElement(self.canon[&inv])
    }

    /// x̄ = c·x.
    pub fn conjugate(&self, a: GroupElement) -> GroupElement {
        self.mul(self.conjugation(), a)
    }

    /// Canonical representative of the image of x in G/⟨c⟩: min(x, cx).
    pub fn real_coset(&self, a: GroupElement) -> u64 {
        let cx = self.conjugate(a);
        a.0.min(cx.0)
    }

    /// Representatives of G/⟨c⟩, ascending.
    pub fn real_cosets(&self) -> Vec<u64> {
        let mut reps: Vec<u64> = self
            .elements()
            .map(|x| self.real_coset(x))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        reps.sort_unstable();
        reps
    }

    /// The subgroup of G generated by the given elements (canonical reps).
    pub fn subgroup_generated(&self, gens: &[GroupElement]) -> BTreeSet<u64> {
        let raw: Vec<u64> = gens.iter().map(|g| g.0).collect();
        let big = subgroup_closure(self.modulus, &raw);
        big.iter().map(|&u| self.canon[&u]).collect()
    }

    pub fn ring(&self) -> &CyclotomicRing {
        &self.ring
    }

    /// ζ_n as a cyclotomic integer; the default monogenic generator when
    /// the field is the full cyclotomic field.
    pub fn zeta(&self) -> CyclotomicInteger {
        self.ring.zeta()
    }

    /// Galois action of a group element (via any representative) on Z[ζ_n].
    /// Well defined on E-valued inputs since H fixes E pointwise.
    pub fn apply(&self, a: GroupElement, x: &CyclotomicInteger) -> CyclotomicInteger {
        self.ring.galois(x, a.0)
    }

    /// N_{Q(ζ_n)/Q}(x), exact.
    pub fn cyclotomic_norm(&self, x: &CyclotomicInteger) -> Result<BigInt, FieldError> {
        if x.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        Ok(self.ring.norm(x))
    }

    /// Norm down to a subfield of the given degree, when the full norm is an
    /// exact power. Callers working with valuations should prefer
    /// [`GaloisCMField::norm_valuation`] which rescales exponents instead.
    pub fn norm_in_subfield(
        &self,
        x: &CyclotomicInteger,
        subfield_degree: usize,
    ) -> Result<BigInt, FieldError> {
        let full = self.cyclotomic_norm(x)?;
        let total = self.ring.degree();
        if subfield_degree == 0 || !total.is_multiple_of(subfield_degree) {
            return Err(FieldError::InvalidSubfieldDegree(subfield_degree, total));
        }
        let k = (total / subfield_degree) as u32;
        if k == 1 {
            return Ok(full);
        }
        let root = full.abs().nth_root(k);
        if num::pow::pow(root.clone(), k as usize) != full.abs() {
            return Err(FieldError::NotInSubfield);
        }
        Ok(root)
    }

    /// v_p(N_{E/Q}(x)) as an exact rational: the full cyclotomic valuation
    /// divided by [Q(ζ_n) : E].
    pub fn norm_valuation(&self, x: &CyclotomicInteger, p: u64) -> Result<BigRational, FieldError> {
        let full = self.cyclotomic_norm(x)?;
        let index = euler_phi(self.modulus) as i64 / self.order() as i64;
        let v = crate::arith::valuation(&full, p) as i64;
        Ok(BigRational::new(BigInt::from(v), BigInt::from(index)))
    }

    /// Field spec string `n` or `n:g1:g2,...` used in reports.
    pub fn spec_string(&self) -> String {
        // minimal generating part: list the kernel itself minus identity if small
        let gens: Vec<String> = self
            .kernel
            .iter()
            .filter(|&&h| h != 1)
            .map(|h| h.to_string())
            .collect();
        if gens.is_empty() {
            format!("{}", self.modulus)
        } else {
            format!("{}:{}", self.modulus, gens.join(":"))
        }
    }
}
