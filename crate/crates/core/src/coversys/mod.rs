//! Finite cover systems and the algebra around them.
//!
//! A cover system is a poset with a relation `x |> C` between points and
//! sets of points. Its `j` operator collects the points locally covered by
//! a set, and its propositions are the up-sets fixed by `j`. A relation `R`
//! adds the operator `<R>A = R⁻¹(A)`. Finite lattices with a monotone
//! operator are represented as the propositions of a built cover system,
//! and formulas are evaluated to truth sets over a finite domain.
//!
//! Sets of points are `u64` bitmasks; every check quantifies exhaustively.

mod generate;
mod io;
mod locale;
mod poset;
mod repr;
mod system;
mod truth;

use serde::Serialize;
use thiserror::Error;

pub use generate::{
    generated_systems, modal_extensions, random_system, random_systems, sl_systems,
    strict_systems_exhaustive,
};
pub use io::{
    parse_structure, CoverSystemFile, LocaleFile, PredicateModelFile, Structure, ValuationEntry,
};
pub use locale::{
    alt_mult_agrees, classify_operator, distributive_lattices_up_to_iso, lattices_up_to_iso,
    FiniteLocale, LawFailure, LocaleViolation, OperatorFlags,
};
pub use poset::{
    for_each_permutation, mask_of, members, naturally_labelled, posets_up_to_iso, FinitePoset,
    PosetError, DEFAULT_SUBSET_CAP, MAX_POINTS,
};
pub use repr::{
    build_sl, dedekind_macneille, extend_lower, extend_upper, principal, representation_iso,
    Completion, IsoReport,
};
pub use system::{
    check_diamond_multiplicative, check_diamond_prenucleus, check_j_nucleus, classify_cover_system,
    CoverFlags, CoverSystem, Failure,
};
pub use truth::{forces_at, truth_set, Interpretation, PredicateModel};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum CoverError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Locale(#[from] LocaleViolation),
    #[error("index out of range in {0}")]
    OutOfRange(String),
    #[error("the system has no relation R")]
    NoRelation,
    #[error("predicate `{name}` of arity {arity} has no valuation")]
    UnboundPredicate { name: String, arity: usize },
    #[error("variable `{0}` is not assigned")]
    UnassignedVariable(String),
    #[error("{0} is not a proposition")]
    NotAProposition(String),
    #[error("malformed structure file: {0}")]
    Json(String),
}
