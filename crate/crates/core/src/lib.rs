//! Craig interpolation for ground EUF literal sets.
//!
//! A problem is a pair of literal sets A and B that are jointly
//! unsatisfiable. [`interpolate`] runs a proof-producing congruence closure
//! over both sets, repairs and colors the resulting graph, and reads off a
//! conjunction of Horn clauses over the shared symbols. [`verify`] rechecks
//! any such formula with an independent closure, and [`game`] extracts
//! interpolants from local refutation proofs in an arbitrary theory.

pub mod coloring;
pub mod congruence;
pub mod error;
pub mod game;
pub mod gen;
pub mod horn;
pub mod interpolate;
pub mod problem;
pub mod sexp;
pub mod term;
mod union_find;
pub mod verify;

pub use coloring::Strategy;
pub use error::{Error, Result};
pub use horn::{parse_horn, Conclusion, HornClause, HornConjunction};
pub use interpolate::{interpolate, Outcome};
pub use problem::{parse_problem, ProblemInstance};
pub use term::{Colorability, Literal, Side, TermId, TermTable};
pub use verify::{check_interpolant, EntailmentReport};
