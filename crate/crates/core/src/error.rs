use thiserror::Error;

use crate::sexp::Pos;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{pos}: syntax error: {msg}")]
    Syntax { pos: Pos, msg: String },

    #[error("{pos}: symbol `{symbol}` used with arity {found}, previously {expected}")]
    ArityMismatch {
        pos: Pos,
        symbol: String,
        expected: usize,
        found: usize,
    },

    #[error("literal {literal} occurs in both A and B")]
    Overlap { literal: String },

    #[error("term {term} is not a vertex of the congruence graph")]
    TermOutsideGraph { term: String },

    #[error("{from} and {to} are not connected")]
    NotConnected { from: String, to: String },

    #[error("path is empty")]
    EmptyPath,

    #[error("edge {edge} is not colorable")]
    Uncolorable { edge: usize },

    #[error("A and B are jointly satisfiable")]
    NotUnsatisfiable {
        /// Equivalence classes of the complete congruence graph; every
        /// disequality of A and B crosses two different classes.
        partition: Vec<Vec<String>>,
    },

    #[error("brute-force closure limited to {limit} terms, got {size}")]
    SizeCap { limit: usize, size: usize },

    #[error("invalid proof: {0}")]
    Proof(String),

    #[error("invalid coloring cut: {0}")]
    InvalidCut(String),

    #[error("formula is not a ground Horn clause: {0}")]
    NotHorn(String),
}
