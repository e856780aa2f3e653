//! Ground Horn clauses over equalities, the shape of every interpolant this
//! crate produces.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::problem::{parse_equation, parse_literal};
use crate::sexp::{self, Sexp};
use crate::term::{Literal, TermId, TermTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Conclusion {
    Literal(Literal),
    False,
}

/// `premises => conclusion`, where the premises are equalities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HornClause {
    premises: BTreeSet<Literal>,
    conclusion: Conclusion,
}

impl HornClause {
    /// Builds a normalized clause: reflexive premises are dropped, and
    /// `None` is returned for clauses that are valid on their face (the
    /// conclusion is reflexive or is one of the premises).
    pub fn new(premises: impl IntoIterator<Item = Literal>, conclusion: Conclusion) -> Option<Self> {
        let premises: BTreeSet<Literal> = premises
            .into_iter()
            .inspect(|p| assert!(p.is_equality(), "Horn premises are equalities"))
            .filter(|p| p.lhs() != p.rhs())
            .collect();
        if let Conclusion::Literal(c) = conclusion {
            if (c.is_equality() && c.lhs() == c.rhs()) || premises.contains(&c) {
                return None;
            }
        }
        Some(HornClause {
            premises,
            conclusion,
        })
    }

    pub fn fact(conclusion: Conclusion) -> Option<Self> {
        Self::new([], conclusion)
    }

    pub fn premises(&self) -> &BTreeSet<Literal> {
        &self.premises
    }

    pub fn conclusion(&self) -> Conclusion {
        self.conclusion
    }

    /// Every literal of the clause, premises first.
    pub fn atoms(&self) -> impl Iterator<Item = Literal> + '_ {
        let concl = match self.conclusion {
            Conclusion::Literal(l) => Some(l),
            Conclusion::False => None,
        };
        self.premises.iter().copied().chain(concl)
    }

    pub fn terms(&self) -> impl Iterator<Item = TermId> + '_ {
        self.atoms().flat_map(|l| [l.lhs(), l.rhs()])
    }

    pub fn display<'a>(&'a self, table: &'a TermTable) -> impl fmt::Display + 'a {
        DisplayClause {
            clause: self,
            table,
        }
    }
}

struct DisplayClause<'a> {
    clause: &'a HornClause,
    table: &'a TermTable,
}

impl fmt::Display for DisplayClause<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let concl = match self.clause.conclusion {
            Conclusion::Literal(l) => l.display(self.table).to_string(),
            Conclusion::False => "false".to_owned(),
        };
        if self.clause.premises.is_empty() {
            return f.write_str(&concl);
        }
        f.write_str("(=> (and")?;
        for p in &self.clause.premises {
            write!(f, " {}", p.display(self.table))?;
        }
        write!(f, ") {concl})")
    }
}

/// A set of Horn clauses read as their conjunction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HornConjunction {
    clauses: BTreeSet<HornClause>,
}

impl HornConjunction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, clause: Option<HornClause>) {
        if let Some(c) = clause {
            self.clauses.insert(c);
        }
    }

    pub fn union(&mut self, other: &HornConjunction) {
        self.clauses.extend(other.clauses.iter().cloned());
    }

    pub fn clauses(&self) -> impl Iterator<Item = &HornClause> {
        self.clauses.iter()
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn contains(&self, c: &HornClause) -> bool {
        self.clauses.contains(c)
    }

    pub fn atom_count(&self) -> usize {
        self.clauses.iter().map(|c| c.atoms().count()).sum()
    }

    pub fn display<'a>(&'a self, table: &'a TermTable) -> impl fmt::Display + 'a {
        DisplayConjunction { h: self, table }
    }
}

impl FromIterator<HornClause> for HornConjunction {
    fn from_iter<I: IntoIterator<Item = HornClause>>(iter: I) -> Self {
        HornConjunction {
            clauses: iter.into_iter().collect(),
        }
    }
}

struct DisplayConjunction<'a> {
    h: &'a HornConjunction,
    table: &'a TermTable,
}

impl fmt::Display for DisplayConjunction<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.h.is_empty() {
            return f.write_str("true");
        }
        f.write_str("(and")?;
        for c in &self.h.clauses {
            write!(f, " {}", c.display(self.table))?;
        }
        f.write_str(")")
    }
}

fn parse_conclusion(terms: &mut TermTable, sexp: &Sexp) -> Result<Conclusion> {
    if sexp.atom() == Some("false") {
        return Ok(Conclusion::False);
    }
    parse_literal(terms, sexp).map(Conclusion::Literal)
}

fn parse_clause(terms: &mut TermTable, sexp: &Sexp) -> Result<Option<HornClause>> {
    if sexp.head() != Some("=>") {
        return Ok(HornClause::fact(parse_conclusion(terms, sexp)?));
    }
    let Some([_, premises, conclusion]) = sexp.list() else {
        return Err(Error::NotHorn(format!("{}: expected `(=> PREMISES CONCLUSION)`", sexp.pos)));
    };
    let mut eqs = Vec::new();
    match premises.head() {
        Some("and") => {
            for p in &premises.list().unwrap()[1..] {
                let (s, t) = parse_equation(terms, p)
                    .map_err(|_| Error::NotHorn(format!("{}: premise {p} is not an equality", p.pos)))?;
                eqs.push(Literal::eq(s, t));
            }
        }
        _ if premises.atom() == Some("true") => {}
        _ => {
            let (s, t) = parse_equation(terms, premises).map_err(|_| {
                Error::NotHorn(format!("{}: premise {premises} is not an equality", premises.pos))
            })?;
            eqs.push(Literal::eq(s, t));
        }
    }
    Ok(HornClause::new(eqs, parse_conclusion(terms, conclusion)?))
}

/// Reads a conjunction in the output format. Symbols unknown to `terms` are
/// declared without A/B occurrence flags.
pub fn parse_horn(text: &str, terms: &mut TermTable) -> Result<HornConjunction> {
    let items = sexp::parse_all(text)?;
    let mut h = HornConjunction::new();
    for item in &items {
        if item.atom() == Some("true") {
            continue;
        }
        if item.head() == Some("and") {
            for c in &item.list().unwrap()[1..] {
                h.insert(parse_clause(terms, c)?);
            }
        } else {
            h.insert(parse_clause(terms, item)?);
        }
    }
    Ok(h)
}
