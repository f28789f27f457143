//! Exact-rational class functions on the Galois group of a CM field.
//!
//! On an abelian group every function is a class function; what matters here
//! is membership in the space of functions with f(x) + f(cx) independent of
//! x, duals, conjugation averages, the induced sign function, and the exact
//! decomposition over the character group.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num::complex::Complex64;
use num::{BigInt, BigRational, One, Zero};

use crate::characters::{character_order_lcm, field_characters, DirichletCharacter};
use crate::cyclotomic::CycSum;
use crate::field::{GaloisCMField, GroupElement};

/// A Q-valued function on G, total by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassFunction {
    field: Arc<GaloisCMField>,
    values: BTreeMap<u64, BigRational>,
}

impl ClassFunction {
    pub fn new(field: Arc<GaloisCMField>, values: BTreeMap<u64, BigRational>) -> Self {
        for x in field.elements() {
            assert!(values.contains_key(&x.rep()), "missing value at {x}");
        }
        assert_eq!(values.len(), field.order(), "values off the group");
        ClassFunction { field, values }
    }

    pub fn from_fn<F>(field: Arc<GaloisCMField>, mut f: F) -> Self
    where
        F: FnMut(GroupElement) -> BigRational,
    {
        let values = field.elements().map(|x| (x.rep(), f(x))).collect();
        ClassFunction { field, values }
    }

    pub fn constant(field: Arc<GaloisCMField>, c: BigRational) -> Self {
        Self::from_fn(field, |_| c.clone())
    }

    pub fn zero(field: Arc<GaloisCMField>) -> Self {
        Self::constant(field, BigRational::zero())
    }

    /// The indicator function of a single element.
    pub fn indicator(field: Arc<GaloisCMField>, y: GroupElement) -> Self {
        Self::from_fn(field, |x| {
            if x == y {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
    }

    /// Ind from ⟨c⟩ to G of the sign character of ⟨c⟩: g at the identity,
    /// -g at conjugation, zero elsewhere.
    pub fn induced_sign(field: Arc<GaloisCMField>) -> Self {
        let g = BigInt::from(field.g() as i64);
        let c = field.conjugation();
        Self::from_fn(field.clone(), |x| {
            if x == field.identity() {
                BigRational::from_integer(g.clone())
            } else if x == c {
                -BigRational::from_integer(g.clone())
            } else {
                BigRational::zero()
            }
        })
    }

    pub fn field(&self) -> &Arc<GaloisCMField> {
        &self.field
    }

    pub fn value(&self, x: GroupElement) -> &BigRational {
        &self.values[&x.rep()]
    }

    pub fn values(&self) -> impl Iterator<Item = (GroupElement, &BigRational)> {
        self.values.iter().map(|(&r, v)| (GroupElement(r), v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| v.is_zero())
    }

    pub fn scale(&self, c: &BigRational) -> ClassFunction {
        ClassFunction {
            field: self.field.clone(),
            values: self.values.iter().map(|(&r, v)| (r, v * c)).collect(),
        }
    }

    /// Pointwise dual f^∨(x) = f(x^{-1}); an involution.
    pub fn dual(&self) -> ClassFunction {
        Self::from_fn(self.field.clone(), |x| {
            self.value(self.field.inv(x)).clone()
        })
    }

    /// Average under conjugation, (1/|G|) Σ_h f(h x h^{-1}). Implemented for
    /// a general finite group table even though G is abelian, so the
    /// abelian triviality is a tested fact rather than an assumption.
    pub fn conj_average(&self) -> ClassFunction {
        let order = BigRational::from_integer(BigInt::from(self.field.order() as i64));
        Self::from_fn(self.field.clone(), |x| {
            let mut acc = BigRational::zero();
            for h in self.field.elements() {
                let hxh = self.field.mul(self.field.mul(h, x), self.field.inv(h));
                acc += self.value(hxh);
            }
            acc / &order
        })
    }

    /// Membership test for the CM space: is f(x) + f(cx) the same rational
    /// for every x? Returns that constant if so.
    pub fn cm_constant(&self) -> Option<BigRational> {
        let c = self.field.conjugation();
        let mut expected: Option<BigRational> = None;
        for x in self.field.elements() {
            let s = self.value(x) + self.value(self.field.mul(c, x));
            match &expected {
                None => expected = Some(s),
                Some(e) if *e == s => {}
                Some(_) => return None,
            }
        }
        expected
    }

    /// Exact decomposition over the characters of G.
    pub fn decompose(&self) -> CharacterDecomposition {
        let chars = field_characters(&self.field);
        let order = character_order_lcm(&chars);
        let group_order = BigRational::from_integer(BigInt::from(self.field.order() as i64));
        let entries = chars
            .iter()
            .enumerate()
            .map(|(index, chi)| {
                let mut exact = CycSum::zero(order);
                for x in self.field.elements() {
                    let k = chi
                        .exponent_at_order(x.rep(), order)
                        .expect("group elements are units");
                    // conj(χ(x)) = ζ^{-k}
                    exact.add_term((order - k % order) % order, &(self.value(x) / &group_order));
                }
                // the complex view of an exact zero is pinned to zero so the
                // two views never disagree
                let complex = if exact.is_zero() {
                    Complex64::new(0.0, 0.0)
                } else {
                    exact.to_complex()
                };
                Multiplicity {
                    index,
                    exact,
                    complex,
                }
            })
            .collect();
        CharacterDecomposition {
            field: self.field.clone(),
            order,
            characters: chars,
            entries,
        }
    }
}

impl Add for &ClassFunction {
    type Output = ClassFunction;
    fn add(self, rhs: &ClassFunction) -> ClassFunction {
        assert_eq!(self.field, rhs.field, "class functions on different fields");
        ClassFunction {
            field: self.field.clone(),
            values: self
                .values
                .iter()
                .map(|(&r, v)| (r, v + &rhs.values[&r]))
                .collect(),
        }
    }
}

impl Sub for &ClassFunction {
    type Output = ClassFunction;
    fn sub(self, rhs: &ClassFunction) -> ClassFunction {
        assert_eq!(self.field, rhs.field, "class functions on different fields");
        ClassFunction {
            field: self.field.clone(),
            values: self
                .values
                .iter()
                .map(|(&r, v)| (r, v - &rhs.values[&r]))
                .collect(),
        }
    }
}

impl Neg for &ClassFunction {
    type Output = ClassFunction;
    fn neg(self) -> ClassFunction {
        ClassFunction {
            field: self.field.clone(),
            values: self.values.iter().map(|(&r, v)| (r, -v)).collect(),
        }
    }
}

/// One multiplicity in a character decomposition: exact as an element of
/// Q(ζ_d), with its floating image alongside.
#[derive(Debug, Clone)]
pub struct Multiplicity {
    pub index: usize,
    pub exact: CycSum,
    pub complex: Complex64,
}

/// f = Σ_χ m_χ · χ with exact cyclotomic multiplicities.
#[derive(Debug, Clone)]
pub struct CharacterDecomposition {
    field: Arc<GaloisCMField>,
    pub order: u64,
    characters: Vec<DirichletCharacter>,
    pub entries: Vec<Multiplicity>,
}

impl CharacterDecomposition {
    pub fn character(&self, index: usize) -> &DirichletCharacter {
        &self.characters[index]
    }

    pub fn characters(&self) -> &[DirichletCharacter] {
        &self.characters
    }

    /// The multiplicity of the trivial character, which is rational.
    pub fn trivial_multiplicity(&self) -> BigRational {
        let idx = self
            .characters
            .iter()
            .position(|c| c.is_trivial())
            .expect("trivial character present");
        self.entries[idx]
            .exact
            .as_rational()
            .expect("trivial multiplicity is rational")
    }

    /// Exact multiplicities of even nontrivial characters must vanish for
    /// members of the CM space.
    pub fn even_nontrivial_vanish(&self) -> bool {
        self.entries.iter().all(|m| {
            let chi = &self.characters[m.index];
            chi.is_trivial() || chi.is_odd() || m.exact.is_zero()
        })
    }

    /// Rebuild the function pointwise; exact. Panics if a reconstructed value
    /// fails to be rational, which cannot happen for rational inputs.
    pub fn reconstruct(&self) -> ClassFunction {
        ClassFunction::from_fn(self.field.clone(), |x| {
            let mut acc = CycSum::zero(self.order);
            for m in &self.entries {
                let k = self.characters[m.index]
                    .exponent_at_order(x.rep(), self.order)
                    .expect("group elements are units");
                acc.add_assign(&m.exact.rotate(k));
            }
            acc.as_rational()
                .expect("reconstruction of a rational class function is rational")
        })
    }
}
