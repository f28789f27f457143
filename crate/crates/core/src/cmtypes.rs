//! CM-types, partial CM-types, their generating class functions, and exact
//! verification of the combinatorial identities relating them.

use std::collections::BTreeSet;
use std::sync::Arc;

use num::{BigRational, One, Zero};
use thiserror::Error;

use crate::arith::rat;
use crate::classfn::ClassFunction;
use crate::field::{GaloisCMField, GroupElement};

/// Enumeration guard: 2^g blows up fast.
pub const MAX_ENUMERATION_G: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CMTypeError {
    #[error("subset is not a CM-type: it must pick one embedding per conjugate pair")]
    NotCMType,
    #[error("subset is not a partial CM-type: it meets its own conjugate")]
    NotPartialType,
    #[error("enumeration limit exceeded: g = {0} > {MAX_ENUMERATION_G}")]
    TooLarge(usize),
    #[error("CM-types are not nearby: they must differ in exactly one embedding")]
    NotNearby,
    #[error("fields do not match")]
    FieldMismatch,
    #[error("incompatible subfield presentation")]
    BadSubfield,
}

/// A full CM-type: Φ ⊔ cΦ = G.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CMType {
    field: Arc<GaloisCMField>,
    members: BTreeSet<u64>,
}

/// A partial CM-type: φ ∩ cφ = ∅.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialCMType {
    field: Arc<GaloisCMField>,
    members: BTreeSet<u64>,
}

impl CMType {
    pub fn new(field: Arc<GaloisCMField>, reps: &[u64]) -> Result<Self, CMTypeError> {
        let members: BTreeSet<u64> = reps
            .iter()
            .map(|&r| field.element(r).map(|e| e.rep()))
            .collect::<Result<_, _>>()
            .map_err(|_| CMTypeError::NotCMType)?;
        if members.len() != field.g() {
            return Err(CMTypeError::NotCMType);
        }
        let c = field.conjugation();
        for &m in &members {
            if members.contains(&field.mul(c, GroupElement(m)).rep()) {
                return Err(CMTypeError::NotCMType);
            }
        }
        Ok(CMType { field, members })
    }

    pub fn field(&self) -> &Arc<GaloisCMField> {
        &self.field
    }

    pub fn members(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.members.iter().map(|&r| GroupElement(r))
    }

    pub fn contains(&self, x: GroupElement) -> bool {
        self.members.contains(&x.rep())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The conjugate type cΦ.
    pub fn conjugate(&self) -> CMType {
        let c = self.field.conjugation();
        let members = self.members().map(|m| self.field.mul(c, m).rep()).collect();
        CMType {
            field: self.field.clone(),
            members,
        }
    }

    /// Translate by a group element: xΦ.
    pub fn translate(&self, x: GroupElement) -> CMType {
        let members = self.members().map(|m| self.field.mul(x, m).rep()).collect();
        CMType {
            field: self.field.clone(),
            members,
        }
    }

    pub fn as_partial(&self) -> PartialCMType {
        PartialCMType {
            field: self.field.clone(),
            members: self.members.clone(),
        }
    }

    /// Canonical encoding used for deterministic ordering in reports.
    pub fn spec_string(&self) -> String {
        let parts: Vec<String> = self.members.iter().map(|m| m.to_string()).collect();
        format!("full:{}", parts.join(","))
    }
}

impl PartialCMType {
    pub fn new(field: Arc<GaloisCMField>, reps: &[u64]) -> Result<Self, CMTypeError> {
        let members: BTreeSet<u64> = reps
            .iter()
            .map(|&r| field.element(r).map(|e| e.rep()))
            .collect::<Result<_, _>>()
            .map_err(|_| CMTypeError::NotPartialType)?;
        let c = field.conjugation();
        for &m in &members {
            if members.contains(&field.mul(c, GroupElement(m)).rep()) {
                return Err(CMTypeError::NotPartialType);
            }
        }
        Ok(PartialCMType { field, members })
    }

    pub fn field(&self) -> &Arc<GaloisCMField> {
        &self.field
    }

    pub fn members(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.members.iter().map(|&r| GroupElement(r))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: GroupElement) -> bool {
        self.members.contains(&x.rep())
    }

    /// Σ: the image of φ in G/⟨c⟩, as canonical real-coset representatives.
    pub fn sigma(&self) -> BTreeSet<u64> {
        self.members().map(|m| self.field.real_coset(m)).collect()
    }

    /// Σ_E: the preimage of Σ in G, i.e. φ ∪ cφ.
    pub fn sigma_preimage(&self) -> BTreeSet<u64> {
        let c = self.field.conjugation();
        let mut out = self.members.clone();
        for m in self.members() {
            out.insert(self.field.mul(c, m).rep());
        }
        out
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == self.field.g()
    }

    pub fn conjugate(&self) -> PartialCMType {
        let c = self.field.conjugation();
        let members = self.members().map(|m| self.field.mul(c, m).rep()).collect();
        PartialCMType {
            field: self.field.clone(),
            members,
        }
    }

    pub fn spec_string(&self) -> String {
        let parts: Vec<String> = self.members.iter().map(|m| m.to_string()).collect();
        format!("partial:{}", parts.join(","))
    }
}

/// a_{Φ,τ}: the indicator of {x : xτ ∈ Φ}.
pub fn a_phi_tau(phi: &CMType, tau: GroupElement) -> ClassFunction {
    let field = phi.field().clone();
    ClassFunction::from_fn(field.clone(), |x| {
        if phi.contains(field.mul(x, tau)) {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    })
}

/// b_{τ,ρ} = ½·1_{ρτ^{-1}} - ½·1_{cρτ^{-1}}.
pub fn b_tau_rho(
    field: &Arc<GaloisCMField>,
    tau: GroupElement,
    rho: GroupElement,
) -> ClassFunction {
    let x = field.mul(rho, field.inv(tau));
    let cx = field.mul(field.conjugation(), x);
    ClassFunction::from_fn(field.clone(), |y| {
        if y == x {
            rat(1, 2)
        } else if y == cx {
            rat(-1, 2)
        } else {
            BigRational::zero()
        }
    })
}

/// A_Φ(x) = |Φ ∩ xΦ|.
pub fn a_full(phi: &CMType) -> ClassFunction {
    let field = phi.field().clone();
    ClassFunction::from_fn(field.clone(), |x| {
        let count = phi
            .members()
            .filter(|&m| phi.contains(field.mul(x, m)))
            .count();
        BigRational::from_integer(count.into())
    })
}

/// A_φ(x) = |φ ∩ xφ| + ½|Σ ∩ xΣ^c|, with the second term in G/⟨c⟩.
pub fn a_partial(phi: &PartialCMType) -> ClassFunction {
    let field = phi.field().clone();
    let sigma = phi.sigma();
    let sigma_c: BTreeSet<u64> = field
        .real_cosets()
        .into_iter()
        .filter(|r| !sigma.contains(r))
        .collect();
    ClassFunction::from_fn(field.clone(), |x| {
        let direct = phi
            .members()
            .filter(|&m| phi.contains(field.mul(x, m)))
            .count();
        let cross = sigma_c
            .iter()
            .filter(|&&r| sigma.contains(&field.real_coset(field.mul(x, GroupElement(r)))))
            .count();
        BigRational::from_integer(direct.into()) + rat(cross as i64, 2)
    })
}

/// All 2^g CM-types: one choice from each conjugate pair. Pairs are ordered
/// by their least representative, and the enumeration index selects choices
/// with the first pair in the most significant position.
pub fn enumerate_cm_types(field: &Arc<GaloisCMField>) -> Result<Vec<CMType>, CMTypeError> {
    let g = field.g();
    if g > MAX_ENUMERATION_G {
        return Err(CMTypeError::TooLarge(g));
    }
    let c = field.conjugation();
    let mut pairs: Vec<(u64, u64)> = Vec::with_capacity(g);
    let mut seen: BTreeSet<u64> = BTreeSet::new();
    for x in field.elements() {
        if seen.contains(&x.rep()) {
            continue;
        }
        let cx = field.mul(c, x);
        seen.insert(x.rep());
        seen.insert(cx.rep());
        pairs.push((x.rep(), cx.rep()));
    }
    debug_assert_eq!(pairs.len(), g);
    let mut out = Vec::with_capacity(1usize << g);
    for mask in 0u64..(1u64 << g) {
        let members: Vec<u64> = pairs
            .iter()
            .enumerate()
            .map(
                |(j, &(a, b))| {
                    if mask >> (g - 1 - j) & 1 == 0 {
                        a
                    } else {
                        b
                    }
                },
            )
            .collect();
        out.push(CMType::new(field.clone(), &members).expect("construction is valid"));
    }
    Ok(out)
}

/// CM-types of E containing the given partial type.
pub fn cm_types_containing(phi: &PartialCMType) -> Result<Vec<CMType>, CMTypeError> {
    Ok(enumerate_cm_types(phi.field())?
        .into_iter()
        .filter(|cm| phi.members().all(|m| cm.contains(m)))
        .collect())
}

/// Residual of the expansion of a partial type over full types:
/// A_φ - [2^{-(g-|φ|)} Σ_{Φ ⊇ φ} A_Φ - ((g-|φ|)/(g·2^g)) Σ_{Φ'} A_{Φ'}].
/// Identically zero when the identity holds.
pub fn verify_partial_in_full(phi: &PartialCMType) -> Result<ClassFunction, CMTypeError> {
    let field = phi.field().clone();
    let g = field.g() as i64;
    let k = phi.len() as i64;
    let mut restricted = ClassFunction::zero(field.clone());
    for cm in cm_types_containing(phi)? {
        restricted = &restricted + &a_full(&cm);
    }
    let mut unrestricted = ClassFunction::zero(field.clone());
    for cm in enumerate_cm_types(&field)? {
        unrestricted = &unrestricted + &a_full(&cm);
    }
    let pow = |e: i64| -> BigRational {
        let mut v = BigRational::one();
        for _ in 0..e {
            v *= rat(2, 1);
        }
        v
    };
    let term1 = restricted.scale(&(BigRational::one() / pow(g - k)));
    let term2 = unrestricted.scale(&(rat(g - k, g) / pow(g)));
    Ok(&a_partial(phi) - &(&term1 - &term2))
}

/// Unordered pairs {τ, ρ} from Φ, diagonal included.
fn unordered_pairs(phi: &CMType) -> Vec<(GroupElement, GroupElement)> {
    let ms: Vec<GroupElement> = phi.members().collect();
    let mut pairs = Vec::new();
    for i in 0..ms.len() {
        for j in i..ms.len() {
            pairs.push((ms[i], ms[j]));
        }
    }
    pairs
}

/// Outcome of expanding a full type over its size-≤2 partial types.
#[derive(Debug, Clone)]
pub struct FullInPartial {
    /// R = A_Φ - Σ_{unordered pairs} A_{{τ,ρ}}, exact.
    pub residual: ClassFunction,
    /// R minus the constant -g(g-1)/2.
    pub printed_mismatch: ClassFunction,
    /// R minus [-g(g-1)/2 - g(g-1)·b_{τ,τ}].
    pub corrected_mismatch: ClassFunction,
    pub matches_printed: bool,
    pub matches_corrected: bool,
}

/// Compare A_Φ - Σ A_{{τ,ρ}} against both candidate right-hand sides; the
/// candidate including the diagonal b-terms is the one that vanishes.
pub fn verify_full_in_partial(phi: &CMType) -> FullInPartial {
    let field = phi.field().clone();
    let g = field.g() as i64;
    let mut pairs_sum = ClassFunction::zero(field.clone());
    for (tau, rho) in unordered_pairs(phi) {
        let pt = PartialCMType::new(field.clone(), &[tau.rep(), rho.rep()])
            .expect("members of a CM-type form partial types");
        pairs_sum = &pairs_sum + &a_partial(&pt);
    }
    let residual = &a_full(phi) - &pairs_sum;
    let constant = ClassFunction::constant(field.clone(), rat(-g * (g - 1) / 2, 1));
    let any_tau = phi.members().next().expect("nonempty type");
    let diag = b_tau_rho(&field, any_tau, any_tau).scale(&rat(-g * (g - 1), 1));
    let printed_mismatch = &residual - &constant;
    let corrected_mismatch = &printed_mismatch - &diag;
    FullInPartial {
        matches_printed: printed_mismatch.is_zero(),
        matches_corrected: corrected_mismatch.is_zero(),
        residual,
        printed_mismatch,
        corrected_mismatch,
    }
}

/// Exact checks for a nearby pair of CM-types (differing in one embedding):
/// a_{Φ1,τ1} + a_{Φ2,τ2} equals the case function (2 at 1, 0 at c, 1
/// elsewhere) and equals 1 + (1/g)·Ind of the sign character.
#[derive(Debug, Clone, PartialEq)]
pub struct NearbyReport {
    pub vs_case_function: ClassFunction,
    pub vs_induced_form: ClassFunction,
}

impl NearbyReport {
    pub fn is_zero(&self) -> bool {
        self.vs_case_function.is_zero() && self.vs_induced_form.is_zero()
    }
}

pub fn verify_nearby_sum(
    phi1: &CMType,
    phi2: &CMType,
    tau1: GroupElement,
    tau2: GroupElement,
) -> Result<NearbyReport, CMTypeError> {
    if phi1.field() != phi2.field() {
        return Err(CMTypeError::FieldMismatch);
    }
    let field = phi1.field().clone();
    let g = field.g() as i64;
    let common: BTreeSet<u64> = phi1.members.intersection(&phi2.members).copied().collect();
    if common.len() != field.g() - 1 {
        return Err(CMTypeError::NotNearby);
    }
    let diff1: Vec<u64> = phi1.members.difference(&common).copied().collect();
    let diff2: Vec<u64> = phi2.members.difference(&common).copied().collect();
    if diff1 != vec![tau1.rep()] || diff2 != vec![tau2.rep()] {
        return Err(CMTypeError::NotNearby);
    }
    let sum = &a_phi_tau(phi1, tau1) + &a_phi_tau(phi2, tau2);
    let c = field.conjugation();
    let case = ClassFunction::from_fn(field.clone(), |x| {
        if x == field.identity() {
            rat(2, 1)
        } else if x == c {
            BigRational::zero()
        } else {
            BigRational::one()
        }
    });
    let induced_form = &ClassFunction::constant(field.clone(), BigRational::one())
        + &ClassFunction::induced_sign(field.clone()).scale(&rat(1, g));
    Ok(NearbyReport {
        vs_case_function: &sum - &case,
        vs_induced_form: &sum - &induced_form,
    })
}

/// The type-average identity: (1/2^g) Σ_Φ A_Φ = g/2 + g·b_{τ,τ}. The residual
/// is returned both with and without the 1/2^g normalization.
#[derive(Debug, Clone)]
pub struct AverageIdentity {
    pub normalized: ClassFunction,
    pub unnormalized: ClassFunction,
}

pub fn verify_average_identity(field: &Arc<GaloisCMField>) -> Result<AverageIdentity, CMTypeError> {
    let g = field.g() as i64;
    let mut total = ClassFunction::zero(field.clone());
    for cm in enumerate_cm_types(field)? {
        total = &total + &a_full(&cm);
    }
    let tau = field.identity();
    let rhs = &ClassFunction::constant(field.clone(), rat(g, 2))
        + &b_tau_rho(field, tau, tau).scale(&rat(g, 1));
    let mut half_pow = BigRational::one();
    for _ in 0..field.g() {
        half_pow *= rat(1, 2);
    }
    Ok(AverageIdentity {
        normalized: &total.scale(&half_pow) - &rhs,
        unnormalized: &total - &rhs,
    })
}

/// The CM-type of `field` induced from a CM-type of a subfield presented on a
/// modulus dividing this one: the set of embeddings restricting into it.
pub fn induced_type(sub_type: &CMType, field: &Arc<GaloisCMField>) -> Result<CMType, CMTypeError> {
    let sub = sub_type.field();
    if !field.modulus().is_multiple_of(sub.modulus()) {
        return Err(CMTypeError::BadSubfield);
    }
    // the restriction map a mod n -> a mod m must carry kernel into kernel
    for &h in field.kernel() {
        if !sub.kernel().contains(&(h % sub.modulus())) {
            return Err(CMTypeError::BadSubfield);
        }
    }
    let members: Vec<u64> = field
        .elements()
        .filter(|x| {
            let r = sub
                .element(x.rep() % sub.modulus())
                .expect("restriction of a unit is a unit");
            sub_type.contains(r)
        })
        .map(|x| x.rep())
        .collect();
    CMType::new(field.clone(), &members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn field(n: u64, gens: &[u64]) -> Arc<GaloisCMField> {
        Arc::new(GaloisCMField::new(n, gens).unwrap())
    }

    fn values(f: &ClassFunction) -> Vec<BigRational> {
        f.values().map(|(_, v)| v.clone()).collect()
    }

    #[test]
    fn type_construction_contracts() {
        let f5 = field(5, &[]);
        assert!(CMType::new(f5.clone(), &[1, 2]).is_ok());
        assert!(CMType::new(f5.clone(), &[1, 4]).is_err()); // conjugate pair
        assert!(CMType::new(f5.clone(), &[1]).is_err()); // too small
        assert!(PartialCMType::new(f5.clone(), &[1, 4]).is_err());
        assert!(PartialCMType::new(f5.clone(), &[1]).is_ok());
        assert!(PartialCMType::new(f5, &[]).is_ok());
    }

    #[test]
    fn a_phi_tau_examples() {
        let fi = field(4, &[]);
        let phi = CMType::new(fi.clone(), &[1]).unwrap();
        let a = a_phi_tau(&phi, GroupElement(1));
        assert_eq!(a, ClassFunction::indicator(fi.clone(), GroupElement(1)));

        let f5 = field(5, &[]);
        let phi = CMType::new(f5.clone(), &[1, 2]).unwrap();
        let a1 = a_phi_tau(&phi, GroupElement(1));
        let expected1 = &ClassFunction::indicator(f5.clone(), GroupElement(1))
            + &ClassFunction::indicator(f5.clone(), GroupElement(2));
        assert_eq!(a1, expected1);
        let a3 = a_phi_tau(&phi, GroupElement(3));
        let expected3 = &ClassFunction::indicator(f5.clone(), GroupElement(2))
            + &ClassFunction::indicator(f5.clone(), GroupElement(4));
        assert_eq!(a3, expected3);
    }

    #[test]
    fn b_function_examples() {
        let f5 = field(5, &[]);
        // diagonal case
        let b = b_tau_rho(&f5, GroupElement(2), GroupElement(2));
        assert_eq!(
            values(&b),
            vec![rat(1, 2), rat(0, 1), rat(0, 1), rat(-1, 2)]
        );
        // off-diagonal: τ=1, ρ=2 gives ½·1_2 - ½·1_3
        let b12 = b_tau_rho(&f5, GroupElement(1), GroupElement(2));
        assert_eq!(
            values(&b12),
            vec![rat(0, 1), rat(1, 2), rat(-1, 2), rat(0, 1)]
        );
        // b_{τ,ρ} + b_{τ,ρ̄} = 0 for any pair
        for tau in f5.elements() {
            for rho in f5.elements() {
                let sum = &b_tau_rho(&f5, tau, rho) + &b_tau_rho(&f5, tau, f5.conjugate(rho));
                assert!(sum.is_zero());
            }
        }
    }

    #[test]
    fn a_full_tables() {
        let f5 = field(5, &[]);
        let phi = CMType::new(f5.clone(), &[1, 2]).unwrap();
        let a = a_full(&phi);
        assert_eq!(values(&a), vec![rat(2, 1), rat(1, 1), rat(1, 1), rat(0, 1)]);
        // identity value g, conjugation value 0, in every field
        for (n, gens) in [(4u64, vec![]), (5, vec![]), (20, vec![9u64]), (7, vec![])] {
            let f = field(n, &gens);
            for cm in enumerate_cm_types(&f).unwrap() {
                let a = a_full(&cm);
                assert_eq!(a.value(f.identity()), &rat(f.g() as i64, 1));
                assert_eq!(a.value(f.conjugation()), &rat(0, 1));
            }
        }
    }

    #[test]
    fn a_partial_tables() {
        let f5 = field(5, &[]);
        let phi = PartialCMType::new(f5.clone(), &[1]).unwrap();
        assert_eq!(
            values(&a_partial(&phi)),
            vec![rat(1, 1), rat(1, 2), rat(1, 2), rat(0, 1)]
        );

        // on the biquadratic field, order of elements is [1, 3, 11=c, 13=σ]
        let f20 = field(20, &[9]);
        let phi1 = PartialCMType::new(f20.clone(), &[1]).unwrap();
        assert_eq!(
            values(&a_partial(&phi1)),
            vec![rat(1, 1), rat(1, 2), rat(0, 1), rat(1, 2)]
        );

        // a full type seen as partial gives the same generating function
        let full = CMType::new(f5.clone(), &[1, 2]).unwrap();
        assert_eq!(a_partial(&full.as_partial()), a_full(&full));
    }

    #[test]
    fn enumeration_order() {
        let fi = field(4, &[]);
        let types: Vec<Vec<u64>> = enumerate_cm_types(&fi)
            .unwrap()
            .iter()
            .map(|t| t.members.iter().copied().collect())
            .collect();
        assert_eq!(types, vec![vec![1], vec![3]]);

        let f5 = field(5, &[]);
        let types: Vec<BTreeSet<u64>> = enumerate_cm_types(&f5)
            .unwrap()
            .iter()
            .map(|t| t.members.clone())
            .collect();
        let expect: Vec<BTreeSet<u64>> = [vec![1, 2], vec![1, 3], vec![4, 2], vec![4, 3]]
            .iter()
            .map(|v| v.iter().copied().collect())
            .collect();
        assert_eq!(types, expect);

        let f20 = field(20, &[9]);
        assert_eq!(enumerate_cm_types(&f20).unwrap().len(), 4);
    }

    #[test]
    fn partial_in_full_residual_vanishes() {
        let f5 = field(5, &[]);
        let phi = PartialCMType::new(f5.clone(), &[1]).unwrap();
        assert!(verify_partial_in_full(&phi).unwrap().is_zero());

        // full CM-types: both corrections cancel
        for cm in enumerate_cm_types(&f5).unwrap() {
            assert!(verify_partial_in_full(&cm.as_partial()).unwrap().is_zero());
        }

        // every size-2 partial type of the biquadratic field
        let f20 = field(20, &[9]);
        let elems: Vec<u64> = f20.element_reps().to_vec();
        let mut checked = 0;
        for i in 0..elems.len() {
            for j in i + 1..elems.len() {
                if let Ok(pt) = PartialCMType::new(f20.clone(), &[elems[i], elems[j]]) {
                    assert!(verify_partial_in_full(&pt).unwrap().is_zero());
                    checked += 1;
                }
            }
        }
        assert_eq!(checked, 4);
    }

    #[test]
    fn full_in_partial_adjudication() {
        // hand enumeration on Q(ζ5), Φ = {1,2}: R = (-2,-1,-1,0)
        let f5 = field(5, &[]);
        let phi = CMType::new(f5.clone(), &[1, 2]).unwrap();
        let report = verify_full_in_partial(&phi);
        assert_eq!(
            values(&report.residual),
            vec![rat(-2, 1), rat(-1, 1), rat(-1, 1), rat(0, 1)]
        );
        assert!(!report.matches_printed);
        assert!(report.matches_corrected);

        // g = 1 edge case: single pair, everything cancels
        let fi = field(4, &[]);
        let phi = CMType::new(fi.clone(), &[1]).unwrap();
        let report = verify_full_in_partial(&phi);
        assert!(report.residual.is_zero());

        // R(x) + R(cx) is constant: R stays in the CM space
        for (n, gens) in [(5u64, vec![]), (20, vec![9u64]), (7, vec![])] {
            let f = field(n, &gens);
            for cm in enumerate_cm_types(&f).unwrap() {
                let report = verify_full_in_partial(&cm);
                assert!(report.residual.cm_constant().is_some());
                assert!(report.matches_corrected);
            }
        }
    }

    #[test]
    fn nearby_sum_examples() {
        let f5 = field(5, &[]);
        let phi1 = CMType::new(f5.clone(), &[1, 2]).unwrap();
        let phi2 = CMType::new(f5.clone(), &[1, 3]).unwrap();
        let report = verify_nearby_sum(&phi1, &phi2, GroupElement(2), GroupElement(3)).unwrap();
        assert!(report.is_zero());
        // symmetry under swapping arguments
        let swapped = verify_nearby_sum(&phi2, &phi1, GroupElement(3), GroupElement(2)).unwrap();
        assert!(swapped.is_zero());

        let fi = field(4, &[]);
        let p1 = CMType::new(fi.clone(), &[1]).unwrap();
        let p2 = CMType::new(fi.clone(), &[3]).unwrap();
        assert!(
            verify_nearby_sum(&p1, &p2, GroupElement(1), GroupElement(3))
                .unwrap()
                .is_zero()
        );

        // non-nearby pair is rejected
        let f20 = field(20, &[9]);
        let q1 = CMType::new(f20.clone(), &[1, 3]).unwrap();
        let q2 = CMType::new(f20.clone(), &[11, 13]).unwrap();
        assert_eq!(
            verify_nearby_sum(&q1, &q2, GroupElement(1), GroupElement(11)),
            Err(CMTypeError::NotNearby)
        );
    }

    #[test]
    fn average_identity_examples() {
        for (n, gens) in [(4u64, vec![]), (5, vec![]), (20, vec![9u64])] {
            let f = field(n, &gens);
            let report = verify_average_identity(&f).unwrap();
            assert!(report.normalized.is_zero(), "normalized residual on {n}");
            if f.g() > 0 {
                assert!(
                    !report.unnormalized.is_zero(),
                    "unnormalized differs on {n}"
                );
            }
        }
    }

    #[test]
    fn partial_cm_closure_invariants() {
        for (n, gens) in [(4u64, vec![]), (5, vec![]), (20, vec![9u64]), (7, vec![])] {
            let f = field(n, &gens);
            let elems: Vec<u64> = f.element_reps().to_vec();
            let mut partials: Vec<PartialCMType> =
                vec![PartialCMType::new(f.clone(), &[]).unwrap()];
            for &a in &elems {
                if let Ok(p) = PartialCMType::new(f.clone(), &[a]) {
                    partials.push(p);
                }
                for &b in &elems {
                    if a < b {
                        if let Ok(p) = PartialCMType::new(f.clone(), &[a, b]) {
                            partials.push(p);
                        }
                    }
                }
            }
            for p in &partials {
                let a = a_partial(p);
                // A_φ(x) + A_φ(cx) = |φ|
                assert_eq!(a.cm_constant(), Some(rat(p.len() as i64, 1)));
                // self-dual
                assert_eq!(a.dual(), a);
                // b-decomposition with the diagonal included
                let mut rhs = ClassFunction::constant(f.clone(), rat(p.len() as i64, 2));
                for s in p.members() {
                    for t in p.members() {
                        rhs = &rhs + &b_tau_rho(&f, s, t);
                    }
                }
                assert_eq!(a, rhs, "b-decomposition on {n} for {:?}", p.members);
            }
        }
    }

    #[test]
    fn diagonal_b_is_scaled_induction() {
        for (n, gens) in [(4u64, vec![]), (5, vec![]), (20, vec![9u64]), (7, vec![])] {
            let f = field(n, &gens);
            let scaled = ClassFunction::induced_sign(f.clone()).scale(&rat(1, 2 * f.g() as i64));
            for tau in f.elements() {
                assert_eq!(b_tau_rho(&f, tau, tau), scaled);
            }
        }
    }

    #[test]
    fn duals_fix_generating_functions() {
        let f5 = field(5, &[]);
        for cm in enumerate_cm_types(&f5).unwrap() {
            let a = a_full(&cm);
            assert_eq!(a.dual(), a);
        }
    }

    #[test]
    fn induced_types() {
        let fi = field(4, &[]);
        let f20 = field(20, &[9]);
        let base = CMType::new(fi.clone(), &[1]).unwrap();
        let lifted = induced_type(&base, &f20).unwrap();
        let members: Vec<u64> = lifted.members.iter().copied().collect();
        assert_eq!(members, vec![1, 13]);

        // induced from Q(sqrt -5) instead
        let f_sqrt5 = field(20, &[3]);
        let base2 = CMType::new(f_sqrt5.clone(), &[1]).unwrap();
        let lifted2 = induced_type(&base2, &f20).unwrap();
        let members2: Vec<u64> = lifted2.members.iter().copied().collect();
        assert_eq!(members2, vec![1, 3]);
    }

    #[test]
    fn translation_invariance_of_a_full() {
        let f20 = field(20, &[9]);
        for cm in enumerate_cm_types(&f20).unwrap() {
            let a = a_full(&cm);
            for x in f20.elements() {
                assert_eq!(a_full(&cm.translate(x)), a);
            }
            assert_eq!(a_full(&cm.conjugate()), a);
        }
    }
}
