//! Problem instances: two disjoint sets of ground literals over a shared term
//! table, read from the s-expression input format
//!
//! ```text
//! (declare-fun f 1)          ; optional
//! (A (= x1 z1) (= z3 (f x1)))
//! (B (not (= z3 z1)))
//! ```

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::sexp::{self, Sexp, SexpKind};
use crate::term::{Literal, Polarity, Side, TermId, TermTable};

/// Atoms that cannot be used as function symbols.
const RESERVED: &[&str] = &["=", "not", "and", "=>", "true", "false", "declare-fun"];

#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub terms: TermTable,
    pub a: Vec<Literal>,
    pub b: Vec<Literal>,
}

impl ProblemInstance {
    pub fn side(&self, side: Side) -> &[Literal] {
        match side {
            Side::A => &self.a,
            Side::B => &self.b,
        }
    }

    /// Literals of both sets, A first, in input order.
    pub fn literals(&self) -> impl Iterator<Item = (Side, usize, Literal)> + '_ {
        let a = self.a.iter().enumerate().map(|(i, &l)| (Side::A, i, l));
        let b = self.b.iter().enumerate().map(|(i, &l)| (Side::B, i, l));
        a.chain(b)
    }

    /// Every term of A and B together with its subterms, in id order.
    pub fn term_set(&self) -> Vec<TermId> {
        crate::term::subterm_closure(
            &self.terms,
            self.literals().flat_map(|(_, _, l)| [l.lhs(), l.rhs()]),
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for side in [Side::A, Side::B] {
            out.push('(');
            out.push_str(&side.to_string());
            for l in self.side(side) {
                out.push_str("\n  ");
                out.push_str(&l.display(&self.terms).to_string());
            }
            out.push_str(")\n");
        }
        out
    }
}

/// Parses a term, declaring symbols with the arity of their first use.
pub fn parse_term(terms: &mut TermTable, sexp: &Sexp) -> Result<TermId> {
    let (name, args, name_sexp) = match &sexp.kind {
        SexpKind::Atom(a) => (a.as_str(), &[][..], sexp),
        SexpKind::List(items) => match items.split_first() {
            Some((head, args)) if !args.is_empty() => match head.atom() {
                Some(name) => (name, args, head),
                None => return Err(head.error("expected a function symbol")),
            },
            _ => return Err(sexp.error("expected a term")),
        },
    };
    if RESERVED.contains(&name) {
        return Err(name_sexp.error(format!("`{name}` is reserved")));
    }
    let args = args
        .iter()
        .map(|a| parse_term(terms, a))
        .collect::<Result<Vec<_>>>()?;
    terms.app(name, args).map_err(|c| Error::ArityMismatch {
        pos: name_sexp.pos,
        symbol: name.to_owned(),
        expected: c.expected,
        found: sexp.list().map_or(0, |l| l.len() - 1),
    })
}

/// Parses `(= s t)`, returning the two sides.
pub fn parse_equation(terms: &mut TermTable, sexp: &Sexp) -> Result<(TermId, TermId)> {
    match sexp.list() {
        Some([eq, s, t]) if eq.atom() == Some("=") => {
            Ok((parse_term(terms, s)?, parse_term(terms, t)?))
        }
        _ => Err(sexp.error("expected `(= s t)`")),
    }
}

/// Parses `(= s t)` or `(not (= s t))`.
pub fn parse_literal(terms: &mut TermTable, sexp: &Sexp) -> Result<Literal> {
    if sexp.head() == Some("not") {
        return match sexp.list() {
            Some([_, inner]) => {
                let (s, t) = parse_equation(terms, inner)?;
                Ok(Literal::new(s, t, Polarity::Disequal))
            }
            _ => Err(sexp.error("expected `(not (= s t))`")),
        };
    }
    let (s, t) = parse_equation(terms, sexp)?;
    Ok(Literal::eq(s, t))
}

fn mark_symbols(terms: &mut TermTable, t: TermId, side: Side) {
    let mut syms = Default::default();
    terms.symbols_of(t, &mut syms);
    for s in syms {
        terms.symbols_mut().mark(s, side);
    }
}

pub fn parse_problem(text: &str) -> Result<ProblemInstance> {
    let items = sexp::parse_all(text)?;
    let mut terms = TermTable::new();
    let mut sets: [Option<Vec<Literal>>; 2] = [None, None];
    let mut last = sexp::Pos::default();

    for item in &items {
        last = item.pos;
        match item.head() {
            Some("declare-fun") => {
                if sets.iter().any(Option::is_some) {
                    return Err(item.error("declarations must precede (A ...) and (B ...)"));
                }
                let Some([_, name, arity]) = item.list() else {
                    return Err(item.error("expected `(declare-fun SYMBOL ARITY)`"));
                };
                let name_str = name
                    .atom()
                    .ok_or_else(|| name.error("expected a symbol"))?;
                if RESERVED.contains(&name_str) {
                    return Err(name.error(format!("`{name_str}` is reserved")));
                }
                let arity: usize = arity
                    .atom()
                    .and_then(|a| a.parse().ok())
                    .ok_or_else(|| arity.error("expected a nonnegative arity"))?;
                terms
                    .symbols_mut()
                    .declare(name_str, arity)
                    .map_err(|c| Error::ArityMismatch {
                        pos: name.pos,
                        symbol: name_str.to_owned(),
                        expected: c.expected,
                        found: arity,
                    })?;
            }
            Some(h @ ("A" | "B")) => {
                let side = if h == "A" { Side::A } else { Side::B };
                let slot = side as usize;
                if sets[slot].is_some() {
                    return Err(item.error(format!("duplicate ({h} ...) block")));
                }
                if side == Side::A && sets[1].is_some() {
                    return Err(item.error("(A ...) must precede (B ...)"));
                }
                let mut seen = HashSet::new();
                let mut lits = Vec::new();
                for lit in &item.list().unwrap()[1..] {
                    let l = parse_literal(&mut terms, lit)?;
                    if seen.insert(l) {
                        lits.push(l);
                    }
                }
                sets[slot] = Some(lits);
            }
            _ => return Err(item.error("expected `(declare-fun ...)`, `(A ...)` or `(B ...)`")),
        }
    }

    let [a, b] = sets;
    let missing = |name: &str| Error::Syntax {
        pos: last,
        msg: format!("missing ({name} ...) block"),
    };
    let a = a.ok_or_else(|| missing("A"))?;
    let b = b.ok_or_else(|| missing("B"))?;

    let in_a: HashSet<Literal> = a.iter().copied().collect();
    if let Some(l) = b.iter().find(|l| in_a.contains(l)) {
        return Err(Error::Overlap {
            literal: l.display(&terms).to_string(),
        });
    }

    for (side, lits) in [(Side::A, &a), (Side::B, &b)] {
        for l in lits {
            mark_symbols(&mut terms, l.lhs(), side);
            mark_symbols(&mut terms, l.rhs(), side);
        }
    }

    Ok(ProblemInstance { terms, a, b })
}
