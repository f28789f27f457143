//! Artin conductor functionals and root discriminants, computed exactly by
//! two independent routes.
//!
//! The character route groups characters by conductor divisor and evaluates
//! subgroup indicator sums, so every μ_{Art,p} value is an exact rational.
//! The valuation route works through norms of differences of a monogenic
//! generator. Their agreement on indicator functions is one of the exact
//! acceptance checks.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, BigRational, One, Zero};
use thiserror::Error;

use crate::arith::{divisors, moebius, prime_factors, valuation};
use crate::characters::{field_characters, DirichletCharacter};
use crate::classfn::ClassFunction;
use crate::cmtypes::{a_partial, PartialCMType};
use crate::cyclotomic::{rational_to_f64, CyclotomicInteger};
use crate::field::{FieldError, GaloisCMField, GroupElement};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConductorError {
    #[error("prime {0} divides the index [O_E : Z[alpha]]; the valuation route is blocked there")]
    IndexDivisible(u64),
    #[error(
        "the supplied generator is not a power basis for the ring of integers at a relevant prime"
    )]
    NonMonogenic,
    #[error("subset must be non-empty")]
    EmptySubset,
    #[error("generator is fixed by a nontrivial element, so it generates a proper subfield")]
    DegenerateGenerator,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A formal sum Σ e_p · log p with exact rational exponents.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FormalLog {
    exps: BTreeMap<u64, BigRational>,
}

impl FormalLog {
    pub fn zero() -> Self {
        FormalLog::default()
    }

    pub fn from_exponents(exps: BTreeMap<u64, BigRational>) -> Self {
        let exps = exps.into_iter().filter(|(_, e)| !e.is_zero()).collect();
        FormalLog { exps }
    }

    pub fn exponent(&self, p: u64) -> BigRational {
        self.exps.get(&p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn exponents(&self) -> &BTreeMap<u64, BigRational> {
        &self.exps
    }

    pub fn is_zero(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn add(&self, other: &FormalLog) -> FormalLog {
        let mut exps = self.exps.clone();
        for (&p, e) in &other.exps {
            let entry = exps.entry(p).or_insert_with(BigRational::zero);
            *entry += e;
        }
        FormalLog::from_exponents(exps)
    }

    pub fn sub(&self, other: &FormalLog) -> FormalLog {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> FormalLog {
        FormalLog::from_exponents(self.exps.iter().map(|(&p, e)| (p, e * c)).collect())
    }

    /// Floating evaluation Σ e_p ln p.
    pub fn eval(&self) -> f64 {
        self.exps
            .iter()
            .map(|(&p, e)| rational_to_f64(e) * (p as f64).ln())
            .sum()
    }
}

/// μ_{Art,p} exponents of a class function at every prime dividing the
/// modulus, with the assembled formal logarithm.
#[derive(Debug, Clone)]
pub struct ConductorReport {
    pub per_prime: BTreeMap<u64, BigRational>,
    pub total: FormalLog,
}

impl ConductorReport {
    pub fn value(&self) -> f64 {
        self.total.eval()
    }
}

/// Conductor of a character; delegated to the character table machinery.
pub fn character_conductor(chi: &DirichletCharacter) -> u64 {
    chi.conductor()
}

/// |d_E| by the conductor-discriminant formula: the product of the
/// conductors of all characters of G.
pub fn discriminant(field: &GaloisCMField) -> BigInt {
    field_characters(field)
        .iter()
        .map(|chi| BigInt::from(chi.conductor()))
        .product()
}

/// |d_F| for the totally real subfield: the product over even characters.
pub fn discriminant_real_subfield(field: &GaloisCMField) -> BigInt {
    field_characters(field)
        .iter()
        .filter(|chi| !chi.is_odd())
        .map(|chi| BigInt::from(chi.conductor()))
        .product()
}

/// The subgroup U_d ⊆ G: image of the units ≡ 1 (mod d).
fn ray_image(field: &GaloisCMField, d: u64) -> BTreeSet<u64> {
    let n = field.modulus();
    let mut out = BTreeSet::new();
    for a in (1..n).filter(|&a| crate::arith::gcd_u64(a, n) == 1) {
        if a % d == 1 % d {
            out.insert(field.element(a).expect("unit").rep());
        }
    }
    out
}

/// μ_{Art,p}(f) = Σ_χ ⟨f,χ⟩ v_p(f_χ), computed exactly by grouping
/// characters by conductor divisor: the sum of ⟨f,χ⟩ over characters of
/// conductor dividing d is the average of f over the ray image U_d.
pub fn mu_art_p(field: &GaloisCMField, f: &ClassFunction, p: u64) -> BigRational {
    let n = field.modulus();
    // c_d = (1/|U_d|) Σ_{x in U_d} f(x), the coefficient mass of conductor | d
    let mut c: BTreeMap<u64, BigRational> = BTreeMap::new();
    for d in divisors(n) {
        let u = ray_image(field, d);
        let mut sum = BigRational::zero();
        for &x in &u {
            sum += f.value(GroupElement(x));
        }
        c.insert(
            d,
            sum / BigRational::from_integer(BigInt::from(u.len() as i64)),
        );
    }
    // Möbius inversion isolates exact conductor m; weight by v_p(m)
    let mut total = BigRational::zero();
    for m in divisors(n) {
        let vp = {
            let mut v = 0i64;
            let mut mm = m;
            while mm % p == 0 {
                v += 1;
                mm /= p;
            }
            v
        };
        if vp == 0 {
            continue;
        }
        let mut exact_mass = BigRational::zero();
        for d in divisors(m) {
            let mu = moebius(m / d);
            if mu != 0 {
                exact_mass += c[&d].clone() * BigRational::from_integer(BigInt::from(mu));
            }
        }
        total += exact_mass * BigRational::from_integer(BigInt::from(vp));
    }
    total
}

/// μ_Art(f) as a formal rational combination of log p, p | n.
pub fn mu_art(field: &GaloisCMField, f: &ClassFunction) -> FormalLog {
    let exps = prime_factors(field.modulus())
        .into_iter()
        .map(|p| (p, mu_art_p(field, f, p)))
        .collect();
    FormalLog::from_exponents(exps)
}

pub fn mu_art_report(field: &GaloisCMField, f: &ClassFunction) -> ConductorReport {
    let total = mu_art(field, f);
    let per_prime = prime_factors(field.modulus())
        .into_iter()
        .map(|p| (p, total.exponent(p)))
        .collect();
    ConductorReport { per_prime, total }
}

/// v_p of the discriminant of the minimal polynomial of alpha, via norms of
/// conjugate differences; exact rational (integral when alpha generates E).
fn disc_generator_valuation(
    field: &GaloisCMField,
    alpha: &CyclotomicInteger,
    p: u64,
) -> Result<BigRational, ConductorError> {
    let mut total = BigRational::zero();
    for y in field.elements() {
        if y == field.identity() {
            continue;
        }
        let diff = field.ring().sub(alpha, &field.apply(y, alpha));
        if diff.is_zero() {
            return Err(ConductorError::DegenerateGenerator);
        }
        total += field.norm_valuation(&diff, p)?;
    }
    Ok(total)
}

/// Check that p does not divide [O_E : Z[alpha]] by comparing the
/// discriminant of alpha with the conductor-discriminant value at p.
fn check_index_at(
    field: &GaloisCMField,
    alpha: &CyclotomicInteger,
    p: u64,
) -> Result<(), ConductorError> {
    let disc_alpha = disc_generator_valuation(field, alpha, p)?;
    let disc_field = BigRational::from_integer(BigInt::from(valuation(&discriminant(field), p)));
    if disc_alpha != disc_field {
        return Err(ConductorError::IndexDivisible(p));
    }
    Ok(())
}

/// μ_{Art,p}(1_y) by the valuation route: (1/2g)·v_p|d_E| at the identity,
/// and -(1/2g)·v_p N_{E/Q}(alpha - y·alpha) elsewhere. Requires p coprime to
/// the index of Z[alpha] in O_E.
pub fn mu_art_p_local(
    field: &GaloisCMField,
    y: GroupElement,
    p: u64,
    alpha: &CyclotomicInteger,
) -> Result<BigRational, ConductorError> {
    check_index_at(field, alpha, p)?;
    let two_g = BigRational::from_integer(BigInt::from(field.order() as i64));
    if y == field.identity() {
        let v = valuation(&discriminant(field), p);
        return Ok(BigRational::from_integer(BigInt::from(v)) / two_g);
    }
    let diff = field.ring().sub(alpha, &field.apply(y, alpha));
    if diff.is_zero() {
        return Err(ConductorError::DegenerateGenerator);
    }
    let v = field.norm_valuation(&diff, p)?;
    Ok(-v / two_g)
}

/// A root discriminant as a formal product Π p^{e_p} over primes dividing
/// the modulus (ramification is supported there).
#[derive(Debug, Clone, PartialEq)]
pub struct RootDiscriminant {
    exps: BTreeMap<u64, BigRational>,
}

impl RootDiscriminant {
    pub fn one() -> Self {
        RootDiscriminant {
            exps: BTreeMap::new(),
        }
    }

    pub fn exponent(&self, p: u64) -> BigRational {
        self.exps.get(&p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn exponents(&self) -> &BTreeMap<u64, BigRational> {
        &self.exps
    }

    pub fn log(&self) -> FormalLog {
        FormalLog::from_exponents(self.exps.clone())
    }

    pub fn value(&self) -> f64 {
        self.log().eval().exp()
    }
}

/// d_S for a subset S of embeddings: exponents
/// e_p = (1/[E:Q]) v_p( Π_{σ≠τ∈S} N_{E/Q}(σα - τα) ), ordered pairs.
/// d_S = 1 for singletons. The generator must be a power basis at every
/// prime dividing the modulus.
pub fn root_discriminant(
    field: &GaloisCMField,
    subset: &BTreeSet<u64>,
    alpha: &CyclotomicInteger,
) -> Result<RootDiscriminant, ConductorError> {
    if subset.is_empty() {
        return Err(ConductorError::EmptySubset);
    }
    for p in prime_factors(field.modulus()) {
        check_index_at(field, alpha, p).map_err(|e| match e {
            ConductorError::IndexDivisible(_) => ConductorError::NonMonogenic,
            other => other,
        })?;
    }
    if subset.len() == 1 {
        return Ok(RootDiscriminant::one());
    }
    let members: Vec<GroupElement> = subset
        .iter()
        .map(|&r| field.element(r))
        .collect::<Result<_, _>>()?;
    pairwise_difference_exponents(field, &members, alpha)
}

/// Root discriminant of the set of restrictions to the real subfield,
/// computed with the trace generator β = α + c(α). Report-only: no index
/// check is performed for β.
pub fn root_discriminant_real(
    field: &GaloisCMField,
    real_cosets: &BTreeSet<u64>,
    alpha: &CyclotomicInteger,
) -> Result<RootDiscriminant, ConductorError> {
    if real_cosets.is_empty() {
        return Err(ConductorError::EmptySubset);
    }
    if real_cosets.len() == 1 {
        return Ok(RootDiscriminant::one());
    }
    let beta = {
        let c_alpha = field.apply(field.conjugation(), alpha);
        field.ring().add(alpha, &c_alpha)
    };
    let members: Vec<GroupElement> = real_cosets
        .iter()
        .map(|&r| field.element(r))
        .collect::<Result<_, _>>()?;
    pairwise_difference_exponents(field, &members, &beta)
}

/// (1/[E:Q]) v_p of the product of N(σγ - τγ) over ordered pairs from the
/// member list, for every p dividing the modulus.
fn pairwise_difference_exponents(
    field: &GaloisCMField,
    members: &[GroupElement],
    generator: &CyclotomicInteger,
) -> Result<RootDiscriminant, ConductorError> {
    let two_g = BigRational::from_integer(BigInt::from(field.order() as i64));
    let mut exps = BTreeMap::new();
    for p in prime_factors(field.modulus()) {
        let mut total = BigRational::zero();
        for &s in members {
            for &t in members {
                if s == t {
                    continue;
                }
                let diff = field
                    .ring()
                    .sub(&field.apply(s, generator), &field.apply(t, generator));
                if diff.is_zero() {
                    return Err(ConductorError::DegenerateGenerator);
                }
                total += field.norm_valuation(&diff, p)?;
            }
        }
        let e = total / &two_g;
        if !e.is_zero() {
            exps.insert(p, e);
        }
    }
    Ok(RootDiscriminant { exps })
}

/// One row of the discriminant-formula comparison at a prime p.
#[derive(Debug, Clone)]
pub struct DiscriminantFormulaRow {
    pub p: u64,
    /// μ_{Art,p}(A_φ⁰), exact, by the character route.
    pub mu: BigRational,
    /// (|φ|/2[E:Q]) v_p(d_E) - ½ v_p(d_φ) + ¼ v_p(d_Σ) with Σ read as the
    /// preimage of the restriction set in G.
    pub rhs_preimage: BigRational,
    /// The same with d_Σ read over the real subfield, when computable.
    pub rhs_real: Option<BigRational>,
    pub residual_preimage: BigRational,
    pub residual_real: Option<BigRational>,
}

#[derive(Debug, Clone)]
pub struct DiscriminantFormulaReport {
    pub rows: Vec<DiscriminantFormulaRow>,
    pub size: usize,
}

impl DiscriminantFormulaReport {
    pub fn preimage_reading_exact(&self) -> bool {
        self.rows.iter().all(|r| r.residual_preimage.is_zero())
    }
}

/// Compare μ_{Art,p}(A_φ⁰) against the discriminant expansion under the two
/// readings of d_Σ. A pass is only meaningful for |φ| = 1, where the
/// preimage reading coincides with the relative-discriminant form.
pub fn verify_discriminant_formula(
    phi: &PartialCMType,
    alpha: &CyclotomicInteger,
) -> Result<DiscriminantFormulaReport, ConductorError> {
    let field = phi.field().clone();
    let a0 = a_partial(phi).conj_average();
    let d_e = discriminant(&field);
    let d_phi = root_discriminant(&field, &phi.members().map(|m| m.rep()).collect(), alpha)?;
    let d_sigma_pre = root_discriminant(&field, &phi.sigma_preimage(), alpha)?;
    let d_sigma_real = root_discriminant_real(&field, &phi.sigma(), alpha).ok();
    let two_g = BigRational::from_integer(BigInt::from(field.order() as i64));
    let size = BigRational::from_integer(BigInt::from(phi.len() as i64));
    let mut rows = Vec::new();
    for p in prime_factors(field.modulus()) {
        let mu = mu_art_p(&field, &a0, p);
        let lead = &size / (BigRational::from_integer(BigInt::from(2)) * &two_g)
            * BigRational::from_integer(BigInt::from(valuation(&d_e, p)));
        let half = crate::arith::rat(1, 2);
        let quarter = crate::arith::rat(1, 4);
        let rhs_preimage = &lead - &half * d_phi.exponent(p) + &quarter * d_sigma_pre.exponent(p);
        let rhs_real = d_sigma_real
            .as_ref()
            .map(|ds| &lead - &half * d_phi.exponent(p) + &quarter * ds.exponent(p));
        rows.push(DiscriminantFormulaRow {
            p,
            residual_preimage: &mu - &rhs_preimage,
            residual_real: rhs_real.as_ref().map(|r| &mu - r),
            mu,
            rhs_preimage,
            rhs_real,
        });
    }
    Ok(DiscriminantFormulaReport {
        rows,
        size: phi.len(),
    })
}

/// |disc(min poly of alpha)| restricted to primes dividing the modulus,
/// for monogenicity diagnostics.
pub fn generator_disc_valuations(
    field: &GaloisCMField,
    alpha: &CyclotomicInteger,
) -> Result<BTreeMap<u64, BigRational>, ConductorError> {
    let mut out = BTreeMap::new();
    for p in prime_factors(field.modulus()) {
        out.insert(p, disc_generator_valuation(field, alpha, p)?);
    }
    Ok(out)
}
