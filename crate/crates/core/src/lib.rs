//! A toolkit for a modal lambda calculus for intuitionistic epistemic
//! logic: the calculus itself (syntax, typing, reduction), its translation
//! into the monadic metalanguage, and exhaustive finite checks of the
//! logic's Kripke and cover-system semantics.
//!
//! ```
//! use iel_core::{parser, typecheck, syntax::Context};
//!
//! let t = parser::parse_term(r"\x:a. pure x").unwrap();
//! let ty = typecheck::infer(&Context::empty(), &t).unwrap();
//! assert_eq!(ty.to_string(), "a -> O a");
//! ```

pub mod corpus;
pub mod coversys;
pub mod formula;
pub mod kripke;
pub mod metalang;
pub mod par;
pub mod parser;
pub mod reduce;
pub mod syntax;
pub mod typecheck;

pub use formula::Formula;
pub use syntax::{Component, Context, Term, Type};
