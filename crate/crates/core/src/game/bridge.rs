//! Reading a colored congruence graph as a local refutation.
//!
//! Each edge becomes a node labelled with its equality: basic edges are
//! input leaves, derived edges are congruence steps from their parent paths.
//! A single-colored path is a transitivity step over its edges and a longer
//! path is a transitivity step over its factors. The refutation ends with
//! `false` derived from the refuted disequality and the path joining its
//! sides.

use std::collections::{BTreeSet, HashMap};

use super::formula::Formula;
use super::proof::{LeafOrigin, NodeId, NodeKind, ProofBuilder, ProofTree};
use super::run::GameInterpolant;
use crate::coloring::{factorize, Strategy};
use crate::congruence::{EdgeId, EdgeKind};
use crate::error::{Error, Result};
use crate::horn::{parse_horn, HornConjunction};
use crate::interpolate::{interpolate, Outcome, PathKey};
use crate::problem::ProblemInstance;
use crate::term::{Literal, Side, TermId, TermTable};

pub fn term_formula(terms: &TermTable, t: TermId) -> Formula {
    let name = Formula::atom(terms.symbols().name(terms.head(t)));
    let args = terms.args(t);
    if args.is_empty() {
        return name;
    }
    let mut items = vec![name];
    items.extend(args.iter().map(|&a| term_formula(terms, a)));
    Formula::List(items)
}

pub fn literal_formula(terms: &TermTable, l: Literal) -> Formula {
    let eq = Formula::List(vec![
        Formula::atom("="),
        term_formula(terms, l.lhs()),
        term_formula(terms, l.rhs()),
    ]);
    if l.is_equality() {
        eq
    } else {
        Formula::List(vec![Formula::atom("not"), eq])
    }
}

/// A problem's interpolation outcome and the refutation read off its graph.
#[derive(Debug, Clone)]
pub struct Bridge {
    pub outcome: Outcome,
    pub proof: ProofTree,
}

struct Builder<'a> {
    out: &'a Outcome,
    proof: ProofBuilder,
    paths: HashMap<PathKey, NodeId>,
    edges: HashMap<EdgeId, NodeId>,
}

impl Builder<'_> {
    fn label(&self, a: TermId, b: TermId) -> Formula {
        literal_formula(&self.out.terms, Literal::eq(a, b))
    }

    fn edge(&mut self, e: EdgeId) -> Result<NodeId> {
        if let Some(&n) = self.edges.get(&e) {
            return Ok(n);
        }
        let edge = self.out.graph.graph.edge(e).clone();
        let kind = match &edge.kind {
            EdgeKind::Basic { origin } => NodeKind::Leaf(LeafOrigin::Input(origin.side)),
            EdgeKind::Derived { .. } => {
                let mut premises = Vec::new();
                for (a, b) in edge.parent_pairs() {
                    let n = self.path(PathKey::new(a, b))?;
                    if !premises.contains(&n) {
                        premises.push(n);
                    }
                }
                NodeKind::Step(premises)
            }
        };
        let n = self.proof.add(self.label(edge.u, edge.v), kind)?;
        self.edges.insert(e, n);
        Ok(n)
    }

    fn path(&mut self, key: PathKey) -> Result<NodeId> {
        if let Some(&n) = self.paths.get(&key) {
            return Ok(n);
        }
        let path = self.out.graph.graph.path(key.from, key.to)?;
        let factors = factorize(&self.out.graph, &path)?;
        let n = if path.len() == 1 {
            self.edge(path.steps[0].edge)?
        } else {
            let mut premises = Vec::new();
            if factors.len() == 1 {
                for s in &path.steps {
                    premises.push(self.edge(s.edge)?);
                }
            } else {
                for f in &factors {
                    premises.push(self.path(PathKey::of(&f.path))?);
                }
            }
            self.proof.add(self.label(key.from, key.to), NodeKind::Step(premises))?
        };
        self.paths.insert(key, n);
        Ok(n)
    }
}

/// Interpolates `p` and expands the colored graph into a refutation whose
/// A- and B-symbols are those of the problem.
pub fn euf_bridge(p: &ProblemInstance, strategy: Strategy) -> Result<Bridge> {
    let outcome = interpolate(p, strategy)?;
    let mut b = Builder {
        out: &outcome,
        proof: ProofBuilder::new(),
        paths: HashMap::new(),
        edges: HashMap::new(),
    };
    let refuted = outcome.refuted;
    let (s, t) = (refuted.literal.lhs(), refuted.literal.rhs());
    let eq = if s == t {
        b.proof.add(b.label(s, t), NodeKind::Leaf(LeafOrigin::Axiom))?
    } else {
        b.path(PathKey::new(s, t))?
    };
    let neq = b.proof.add(
        literal_formula(&outcome.terms, refuted.literal),
        NodeKind::Leaf(LeafOrigin::Input(refuted.origin.side)),
    )?;
    let root = b.proof.add(Formula::atom("false"), NodeKind::Step(vec![eq, neq]))?;

    let mut sigma: [BTreeSet<String>; 2] = Default::default();
    for (_, info) in outcome.terms.symbols().iter() {
        for side in [Side::A, Side::B] {
            if info.occurs_in(side) {
                sigma[side as usize].insert(info.name.clone());
            }
        }
    }
    let proof = b.proof.finish(root, BTreeSet::new(), Some(sigma));
    Ok(Bridge { outcome, proof })
}

/// Reads a game interpolant over ground equalities as Horn clauses,
/// interning its terms into `terms`. `false'` is read as `false`.
pub fn game_to_horn(i: &GameInterpolant, terms: &mut TermTable) -> Result<HornConjunction> {
    let mut h = HornConjunction::new();
    for imp in &i.0 {
        let mut imp = imp.clone();
        if imp.conclusion.is_atom("false'") {
            imp.conclusion = Formula::atom("false");
        }
        let clause = parse_horn(&imp.to_string(), terms)
            .map_err(|e| Error::NotHorn(format!("{imp}: {e}")))?;
        h.union(&clause);
    }
    Ok(h)
}
