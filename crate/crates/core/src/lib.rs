//! Certificates of complex multiplication for Jacobians of quasiplatonic
//! Riemann surfaces.
//!
//! A surface is given by a finite permutation group `G` and a generating
//! vector encoding the regular cover `X → X/G ≅ P¹`. From there the crate
//! computes exact character tables, the analytic representation via the
//! Chevalley–Weil formula, quotient genera, and the sufficient criteria that
//! certify complex multiplication of `JX`.
//!
//! Character arithmetic is generic over the coefficient field (see
//! [`Scalar`]); the aliases below fix the exact rational instantiation used
//! for verdicts.

pub mod character;
pub mod criteria;
pub mod cyclotomic;
pub mod error;
pub mod gm;
pub mod group;
pub mod perm;
pub mod report;
pub mod scalar;
pub mod surface;

pub use character::{Character, CharacterTable};
pub use criteria::{
    certify_relation, check_statement_a, check_statement_b, cm_verdict, recheck, search_relation,
    streit_test, verify_isogeny_relation, CMVerdict, Evidence, FactorCertificate, IsogenyRelation,
    RelationCertificate, Route, Status,
};
pub use cyclotomic::Cyclotomic;
pub use error::{Error, Result};
pub use gm::{build_gm, GmInstance};
pub use group::{ConjugacyClass, CosetAction, FiniteGroup, Subgroup};
pub use perm::Permutation;
pub use scalar::Scalar;
pub use surface::{
    analytic_character, chevalley_weil_multiplicities, find_generating_vectors, genus_from_vector,
    GeneratingVector, QuasiplatonicSurface, QuotientSurface, Signature,
};

/// Exact rational coefficients.
pub type Rational = num_rational::BigRational;
/// Exact cyclotomic numbers.
pub type Cyclo = Cyclotomic<Rational>;
/// Exact character.
pub type ExactCharacter = Character<Rational>;
/// Exact character table.
pub type ExactTable = CharacterTable<Rational>;
/// Character table with 64-bit rational coefficients.
pub type Table64 = CharacterTable<num_rational::Rational64>;
/// Floating-point character table, for numerical cross-checks.
pub type FloatTable = CharacterTable<f64>;
