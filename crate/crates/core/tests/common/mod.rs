//! Shared fixtures and a second, independent EUF oracle used to cross-check
//! the library's own verifier.

#![allow(dead_code)]

pub mod suites;

use std::collections::HashMap;

use eufi::horn::Conclusion;
use eufi::term::subterm_closure;
use eufi::{interpolate, parse_horn, parse_problem, HornConjunction, Literal, Outcome, ProblemInstance, Strategy, TermId, TermTable};

pub fn data(name: &str) -> String {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn problem(name: &str) -> ProblemInstance {
    parse_problem(&data(name)).unwrap()
}

pub fn run(name: &str, strategy: Strategy) -> Outcome {
    interpolate(&problem(name), strategy).unwrap()
}

/// Parses `expected` against the outcome's terms and compares clause sets,
/// so equation orientation and conjunct order do not matter.
pub fn same_formula(out: &Outcome, expected: &str) -> bool {
    let mut terms = out.terms.clone();
    let h = parse_horn(expected, &mut terms).unwrap();
    h == out.formula
}

/// Congruence classes over a fixed universe, recomputed from scratch by
/// merging labels until no application pair disagrees.
pub struct Oracle {
    label: HashMap<TermId, usize>,
}

impl Oracle {
    pub fn new(terms: &TermTable, eqs: &[(TermId, TermId)], roots: &[TermId]) -> Oracle {
        let mut all: Vec<TermId> = roots.to_vec();
        all.extend(eqs.iter().flat_map(|&(s, t)| [s, t]));
        let universe = subterm_closure(terms, all);
        let mut label: HashMap<TermId, usize> = universe.iter().map(|&t| (t, t.index())).collect();
        let merge = |label: &mut HashMap<TermId, usize>, s: TermId, t: TermId| {
            let (from, to) = (label[&s], label[&t]);
            if from == to {
                return false;
            }
            for v in label.values_mut() {
                if *v == from {
                    *v = to;
                }
            }
            true
        };
        for &(s, t) in eqs {
            merge(&mut label, s, t);
        }
        loop {
            let mut changed = false;
            for (i, &s) in universe.iter().enumerate() {
                for &t in &universe[i + 1..] {
                    let congruent = terms.head(s) == terms.head(t)
                        && label[&s] != label[&t]
                        && terms.args(s).iter().zip(terms.args(t)).all(|(a, b)| label[a] == label[b]);
                    if congruent {
                        changed |= merge(&mut label, s, t);
                    }
                }
            }
            if !changed {
                return Oracle { label };
            }
        }
    }

    pub fn equal(&self, s: TermId, t: TermId) -> bool {
        self.label[&s] == self.label[&t]
    }
}

fn literals_unsat(terms: &TermTable, lits: &[Literal], h: &HornConjunction) -> bool {
    let mut eqs: Vec<(TermId, TermId)> = lits.iter().filter(|l| l.is_equality()).map(|l| (l.lhs(), l.rhs())).collect();
    let mut neqs: Vec<(TermId, TermId)> = lits.iter().filter(|l| !l.is_equality()).map(|l| (l.lhs(), l.rhs())).collect();
    let roots: Vec<TermId> = lits
        .iter()
        .flat_map(|l| [l.lhs(), l.rhs()])
        .chain(h.clauses().flat_map(|c| c.terms().collect::<Vec<_>>()))
        .collect();
    let mut fired = vec![false; h.len()];
    loop {
        let o = Oracle::new(terms, &eqs, &roots);
        if neqs.iter().any(|&(s, t)| o.equal(s, t)) {
            return true;
        }
        let mut progress = false;
        for (i, c) in h.clauses().enumerate() {
            if fired[i] || !c.premises().iter().all(|p| o.equal(p.lhs(), p.rhs())) {
                continue;
            }
            fired[i] = true;
            progress = true;
            match c.conclusion() {
                Conclusion::False => return true,
                Conclusion::Literal(l) if l.is_equality() => eqs.push((l.lhs(), l.rhs())),
                Conclusion::Literal(l) => neqs.push((l.lhs(), l.rhs())),
            }
        }
        if !progress {
            return false;
        }
    }
}

/// Checks the three interpolant conditions with the test oracle.
pub fn oracle_accepts(p: &ProblemInstance, terms: &TermTable, h: &HornConjunction) -> bool {
    let shared = h.clauses().flat_map(|c| c.terms().collect::<Vec<_>>()).all(|t| terms.colorability(t).is_ab());
    let a_entails = h.clauses().all(|c| {
        let mut lits = p.a.clone();
        lits.extend(c.premises().iter().copied());
        match c.conclusion() {
            Conclusion::False => literals_unsat(terms, &lits, &HornConjunction::new()),
            Conclusion::Literal(l) => {
                lits.push(l.negate());
                literals_unsat(terms, &lits, &HornConjunction::new())
            }
        }
    });
    shared && a_entails && literals_unsat(terms, &p.b, h)
}
