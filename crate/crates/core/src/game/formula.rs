use std::collections::BTreeSet;
use std::fmt;

use crate::sexp::{Sexp, SexpKind};

/// Atoms treated as logical rather than as free or theory symbols.
pub const LOGICAL: &[&str] = &[
    "not", "and", "or", "=>", "=", "iff", "forall", "exists", "true", "false", "false'",
];

/// A formula as an uninterpreted symbol tree. Only its free symbols matter
/// to the game.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    List(Vec<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Self {
        Formula::Atom(name.to_owned())
    }

    pub fn is_atom(&self, name: &str) -> bool {
        matches!(self, Formula::Atom(a) if a == name)
    }

    /// Non-logical, non-theory symbols, skipping variables bound by
    /// `(forall (x ..) body)` and `(exists (x ..) body)`.
    pub fn free_symbols(&self, theory: &BTreeSet<String>) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect(theory, &mut bound, &mut out);
        out
    }

    fn collect(&self, theory: &BTreeSet<String>, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                if !LOGICAL.contains(&a.as_str()) && !theory.contains(a) && !bound.contains(a) {
                    out.insert(a.clone());
                }
            }
            Formula::List(items) => {
                if let [q, vars, body] = items.as_slice() {
                    if q.is_atom("forall") || q.is_atom("exists") {
                        let names: Vec<String> = match vars {
                            Formula::Atom(v) => vec![v.clone()],
                            Formula::List(vs) => vs
                                .iter()
                                .filter_map(|v| match v {
                                    Formula::Atom(v) => Some(v.clone()),
                                    Formula::List(_) => None,
                                })
                                .collect(),
                        };
                        let depth = bound.len();
                        bound.extend(names);
                        body.collect(theory, bound, out);
                        bound.truncate(depth);
                        return;
                    }
                }
                for item in items {
                    item.collect(theory, bound, out);
                }
            }
        }
    }
}

impl From<&Sexp> for Formula {
    fn from(s: &Sexp) -> Self {
        match &s.kind {
            SexpKind::Atom(a) => Formula::Atom(a.clone()),
            SexpKind::List(items) => Formula::List(items.iter().map(Formula::from).collect()),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => f.write_str(a),
            Formula::List(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}
