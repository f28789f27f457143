//! Exact and numerical calculus for abelian Galois CM fields: class
//! functions on the Galois group, CM-types and their generating functions,
//! Artin conductor functionals, Dirichlet L-function special values, and the
//! conjectural height calculators built from them.
//!
//! Everything identity-shaped is computed with exact rational (or exact
//! cyclotomic) arithmetic; floating point only enters where L-values and
//! log-conductors are aggregated into real numbers.

pub mod arith;
pub mod characters;
pub mod classfn;
pub mod cmtypes;
pub mod conductors;
pub mod cyclotomic;
pub mod field;
pub mod heights;
pub mod lfunctions;

pub use characters::{all_characters_mod, field_characters, DirichletCharacter};
pub use classfn::{CharacterDecomposition, ClassFunction};
pub use cmtypes::{CMType, PartialCMType};
pub use conductors::{ConductorReport, FormalLog, RootDiscriminant};
pub use cyclotomic::{CycSum, CyclotomicInteger, CyclotomicRing};
pub use field::{FieldError, GaloisCMField, GroupElement};
pub use heights::HeightReport;
pub use lfunctions::{Convention, Evaluator};

/// Bump when a change would invalidate cached L-values.
pub const EVALUATOR_VERSION: u32 = 1;
