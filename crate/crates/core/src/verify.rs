//! Independent EUF reasoning used to check interpolants.
//!
//! Closures are recomputed by naive rescanning and share no code with
//! [`crate::congruence`].

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::horn::{Conclusion, HornConjunction};
use crate::problem::ProblemInstance;
use crate::term::{subterm_closure, Literal, SymbolId, TermId, TermTable};

/// Largest term set [`brute_force_closure`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 64;

/// Equivalence classes of `universe` under `eqs`, computed as the least
/// relation containing `eqs` that is reflexive, symmetric, transitive and
/// closed under congruence, by repeated full scans of a relation matrix.
#[allow(clippy::needless_range_loop)]
pub fn brute_force_closure(
    terms: &TermTable,
    eqs: &[(TermId, TermId)],
    universe: &[TermId],
) -> Result<Vec<Vec<TermId>>> {
    let n = universe.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeCap {
            limit: BRUTE_FORCE_LIMIT,
            size: n,
        });
    }
    let pos: HashMap<TermId, usize> = universe.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let mut rel = vec![vec![false; n]; n];
    for (i, row) in rel.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(s, t) in eqs {
        let (i, j) = (pos[&s], pos[&t]);
        rel[i][j] = true;
        rel[j][i] = true;
    }
    loop {
        let mut changed = false;
        for k in 0..n {
            for i in 0..n {
                if !rel[i][k] {
                    continue;
                }
                for j in 0..n {
                    if rel[k][j] && !rel[i][j] {
                        rel[i][j] = true;
                        changed = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if rel[i][j] {
                    continue;
                }
                let (a, b) = (terms.get(universe[i]), terms.get(universe[j]));
                if a.head == b.head
                    && !a.args.is_empty()
                    && a.args.iter().zip(&b.args).all(|(x, y)| rel[pos[x]][pos[y]])
                {
                    rel[i][j] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let class: Vec<TermId> = (0..n).filter(|&j| rel[i][j]).map(|j| universe[j]).collect();
        for j in 0..n {
            if rel[i][j] {
                seen[j] = true;
            }
        }
        classes.push(class);
    }
    Ok(classes)
}

/// Class labels over a fixed term universe, recomputed from scratch for
/// every set of equalities.
struct Classes {
    index: HashMap<TermId, usize>,
    label: Vec<usize>,
}

impl Classes {
    fn new(terms: &TermTable, universe: &[TermId], eqs: impl Iterator<Item = (TermId, TermId)>) -> Self {
        let index: HashMap<TermId, usize> = universe.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let mut label: Vec<usize> = (0..universe.len()).collect();
        let eqs: Vec<(usize, usize)> = eqs.map(|(s, t)| (index[&s], index[&t])).collect();
        let relabel = |label: &mut Vec<usize>, from: usize, to: usize| {
            for l in label.iter_mut() {
                if *l == from {
                    *l = to;
                }
            }
        };
        loop {
            let mut changed = false;
            for &(i, j) in &eqs {
                let (a, b) = (label[i], label[j]);
                if a != b {
                    relabel(&mut label, a.max(b), a.min(b));
                    changed = true;
                }
            }
            let mut sigs: HashMap<(SymbolId, Vec<usize>), usize> = HashMap::new();
            for (i, &t) in universe.iter().enumerate() {
                let data = terms.get(t);
                if data.args.is_empty() {
                    continue;
                }
                let sig = (data.head, data.args.iter().map(|a| label[index[a]]).collect());
                match sigs.get(&sig) {
                    Some(&other) if label[other] != label[i] => {
                        let (a, b) = (label[other], label[i]);
                        relabel(&mut label, a.max(b), a.min(b));
                        changed = true;
                    }
                    Some(_) => {}
                    None => {
                        sigs.insert(sig, i);
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Classes { index, label }
    }

    fn same(&self, s: TermId, t: TermId) -> bool {
        self.label[self.index[&s]] == self.label[self.index[&t]]
    }

    fn refutes(&self, lits: &[Literal]) -> bool {
        lits.iter()
            .any(|l| !l.is_equality() && self.same(l.lhs(), l.rhs()))
    }
}

fn equalities(lits: &[Literal]) -> impl Iterator<Item = (TermId, TermId)> + '_ {
    lits.iter().filter(|l| l.is_equality()).map(|l| (l.lhs(), l.rhs()))
}

fn universe_of<'a>(terms: &TermTable, lits: impl IntoIterator<Item = &'a Literal>) -> Vec<TermId> {
    subterm_closure(terms, lits.into_iter().flat_map(|l| [l.lhs(), l.rhs()]))
}

/// Whether a set of ground literals is unsatisfiable.
pub fn euf_unsat(terms: &TermTable, lits: &[Literal]) -> bool {
    let universe = universe_of(terms, lits);
    Classes::new(terms, &universe, equalities(lits)).refutes(lits)
}

/// Whether `lits` entails `goal`.
pub fn euf_entails(terms: &TermTable, lits: &[Literal], goal: Literal) -> bool {
    if goal.is_equality() {
        let universe = universe_of(terms, lits.iter().chain([&goal]));
        let c = Classes::new(terms, &universe, equalities(lits));
        c.same(goal.lhs(), goal.rhs()) || c.refutes(lits)
    } else {
        let mut with = lits.to_vec();
        with.push(goal.negate());
        euf_unsat(terms, &with)
    }
}

/// Whether `lits` together with the clauses of `h` is unsatisfiable, by
/// forward chaining: a clause fires once each of its premises is entailed by
/// the facts so far, adding its conclusion as a fact.
pub fn unsat_with_horn(terms: &TermTable, lits: &[Literal], h: &HornConjunction) -> bool {
    let universe = subterm_closure(
        terms,
        lits.iter()
            .copied()
            .chain(h.clauses().flat_map(|c| c.atoms()))
            .flat_map(|l| [l.lhs(), l.rhs()]),
    );
    let mut facts = lits.to_vec();
    let mut fired = vec![false; h.len()];
    loop {
        let c = Classes::new(terms, &universe, equalities(&facts));
        if c.refutes(&facts) {
            return true;
        }
        let mut changed = false;
        for (i, clause) in h.clauses().enumerate() {
            if fired[i] || !clause.premises().iter().all(|p| c.same(p.lhs(), p.rhs())) {
                continue;
            }
            fired[i] = true;
            changed = true;
            match clause.conclusion() {
                Conclusion::False => return true,
                Conclusion::Literal(l) => facts.push(l),
            }
        }
        if !changed {
            return false;
        }
    }
}

/// Outcome of [`check_interpolant`]; accepted iff all three flags are set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntailmentReport {
    pub shared_signature_ok: bool,
    pub a_entails_i: bool,
    pub b_i_unsat: bool,
    pub failures: Vec<String>,
}

impl EntailmentReport {
    pub fn accepted(&self) -> bool {
        self.shared_signature_ok && self.a_entails_i && self.b_i_unsat
    }
}

/// Checks that `h` is an interpolant of the two sides of `p`: it uses only
/// symbols occurring in both A and B, A entails each clause, and B together
/// with `h` is unsatisfiable.
///
/// `terms` must extend `p.terms` (it may hold extra terms, e.g. those
/// introduced by a repair or by parsing `h`).
pub fn check_interpolant(p: &ProblemInstance, terms: &TermTable, h: &HornConjunction) -> EntailmentReport {
    let mut failures = Vec::new();

    let mut shared_signature_ok = true;
    for (i, clause) in h.clauses().enumerate() {
        let mut syms = Default::default();
        for t in clause.terms() {
            terms.symbols_of(t, &mut syms);
        }
        for s in syms {
            let info = terms.symbols().info(s);
            if !(info.in_a && info.in_b) {
                shared_signature_ok = false;
                failures.push(format!("clause {i}: symbol `{}` is not shared", info.name));
            }
        }
    }

    let mut a_entails_i = true;
    for (i, clause) in h.clauses().enumerate() {
        let mut lits = p.a.clone();
        lits.extend(clause.premises().iter().copied());
        let ok = match clause.conclusion() {
            Conclusion::False => euf_unsat(terms, &lits),
            Conclusion::Literal(l) => euf_entails(terms, &lits, l),
        };
        if !ok {
            a_entails_i = false;
            failures.push(format!("clause {i}: not entailed by A: {}", clause.display(terms)));
        }
    }

    let b_i_unsat = unsat_with_horn(terms, &p.b, h);
    if !b_i_unsat {
        failures.push("B together with the interpolant is satisfiable".to_owned());
    }

    EntailmentReport {
        shared_signature_ok,
        a_entails_i,
        b_i_unsat,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::horn::parse_horn;
    use crate::problem::parse_problem;

    fn table(names: &[&str]) -> (TermTable, Vec<TermId>) {
        let mut t = TermTable::new();
        let ids = names.iter().map(|n| t.constant(n).unwrap()).collect();
        (t, ids)
    }

    #[test]
    fn brute_force_small_cases() {
        let (mut t, ids) = table(&["a", "b"]);
        let fa = t.app("f", vec![ids[0]]).unwrap();
        let fb = t.app("f", vec![ids[1]]).unwrap();
        let u = [ids[0], ids[1], fa, fb];
        let classes = brute_force_closure(&t, &[(ids[0], ids[1])], &u).unwrap();
        assert_eq!(classes, vec![vec![ids[0], ids[1]], vec![fa, fb]]);
        assert_eq!(brute_force_closure(&t, &[], &u).unwrap().len(), 4);
        let chained = brute_force_closure(&t, &[(ids[0], ids[1]), (ids[1], fa), (fa, fb)], &u).unwrap();
        assert_eq!(chained.len(), 1);
    }

    #[test]
    fn size_cap() {
        let names: Vec<String> = (0..BRUTE_FORCE_LIMIT + 1).map(|i| format!("c{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let (t, ids) = table(&refs);
        assert!(matches!(
            brute_force_closure(&t, &[], &ids),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn entailment_basics() {
        let (t, ids) = table(&["a", "b", "c", "d"]);
        let [a, b, c, d] = [ids[0], ids[1], ids[2], ids[3]];
        assert!(euf_entails(&t, &[Literal::eq(a, b), Literal::eq(b, c)], Literal::eq(a, c)));
        assert!(!euf_entails(&t, &[Literal::eq(a, b)], Literal::eq(c, d)));
        assert!(euf_entails(&t, &[Literal::eq(a, b), Literal::neq(b, c)], Literal::neq(a, c)));
        assert!(!unsat_with_horn(&t, &[], &HornConjunction::new()));
    }

    #[test]
    fn horn_saturation() {
        let p = parse_problem("(A (= a b)) (B (not (= a b)))").unwrap();
        let mut terms = p.terms.clone();
        let h = parse_horn("(= a b)", &mut terms).unwrap();
        assert!(unsat_with_horn(&terms, &p.b, &h));
        let h = parse_horn("(and (=> (and (= a c)) (= a b)))", &mut terms).unwrap();
        assert!(!unsat_with_horn(&terms, &p.b, &h));
        let h = parse_horn("(and (= a c) (=> (and (= (f a) (f c))) (= a b)))", &mut terms).unwrap();
        assert!(unsat_with_horn(&terms, &p.b, &h));
    }

    #[test]
    fn report_flags() {
        let p = parse_problem("(A (= u1 (* x u0)) (= v1 (* x v0))) (B (= u0 v0) (not (= u1 v1)))").unwrap();
        let mut terms = p.terms.clone();
        let good = parse_horn("(=> (and (= u0 v0)) (= u1 v1))", &mut terms).unwrap();
        assert!(check_interpolant(&p, &terms, &good).accepted());
        let r = check_interpolant(&p, &terms, &HornConjunction::new());
        assert!(r.shared_signature_ok && r.a_entails_i && !r.b_i_unsat);
        let local = parse_horn("(= u1 (* x u0))", &mut terms).unwrap();
        let r = check_interpolant(&p, &terms, &local);
        assert!(!r.shared_signature_ok && r.a_entails_i);
        let wrong = parse_horn("(= u1 v1)", &mut terms).unwrap();
        let r = check_interpolant(&p, &terms, &wrong);
        assert!(r.shared_signature_ok && !r.a_entails_i && r.b_i_unsat);
        assert_eq!(r.failures.len(), 1);
    }
}
