//! Proof-producing congruence closure.
//!
//! The closure records every merge as an edge of an undirected graph over the
//! term set. An edge is *basic* when it comes from an input equality and
//! *derived* when it comes from congruence, in which case it remembers the
//! argument pairs that were already connected when it was added. An edge is
//! only ever added between vertices that are not yet connected, so the graph is
//! a forest and connected vertices have exactly one path between them.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::problem::ProblemInstance;
use crate::term::{Literal, Side, SymbolId, TermId, TermTable};
use crate::union_find::UnionFind;

pub type EdgeId = usize;

/// Position of an input literal: its set and its index within that set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Origin {
    pub side: Side,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeKind {
    Basic { origin: Origin },
    /// `parents[i]` is the pair of i-th arguments of the two endpoints.
    /// Pairs with equal components stand for empty parent paths.
    Derived { parents: Vec<(TermId, TermId)> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: TermId,
    pub v: TermId,
    pub kind: EdgeKind,
    /// Creation index; equal to the position in [`CongruenceGraph::edges`].
    pub seq: usize,
}

impl Edge {
    pub fn is_derived(&self) -> bool {
        matches!(self.kind, EdgeKind::Derived { .. })
    }

    pub fn other(&self, t: TermId) -> TermId {
        if t == self.u {
            self.v
        } else {
            self.u
        }
    }

    /// Non-empty parent pairs of a derived edge; empty for basic edges.
    pub fn parent_pairs(&self) -> impl Iterator<Item = (TermId, TermId)> + '_ {
        let parents: &[(TermId, TermId)] = match &self.kind {
            EdgeKind::Derived { parents } => parents,
            EdgeKind::Basic { .. } => &[],
        };
        parents.iter().copied().filter(|(a, b)| a != b)
    }
}

/// An input equality handed to [`close`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Equation {
    pub lhs: TermId,
    pub rhs: TermId,
    pub origin: Origin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    pub edge: EdgeId,
    /// True when the step walks the edge from `u` to `v`.
    pub forward: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub from: TermId,
    pub to: TermId,
    pub steps: Vec<Step>,
    /// `steps.len() + 1` vertices, starting at `from`.
    pub vertices: Vec<TermId>,
}

impl Path {
    pub fn empty(t: TermId) -> Self {
        Path {
            from: t,
            to: t,
            steps: Vec::new(),
            vertices: vec![t],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn reversed(&self) -> Path {
        Path {
            from: self.to,
            to: self.from,
            steps: self
                .steps
                .iter()
                .rev()
                .map(|s| Step {
                    edge: s.edge,
                    forward: !s.forward,
                })
                .collect(),
            vertices: self.vertices.iter().rev().copied().collect(),
        }
    }

    /// Sub-path between vertex positions `i <= j`.
    pub fn slice(&self, i: usize, j: usize) -> Path {
        Path {
            from: self.vertices[i],
            to: self.vertices[j],
            steps: self.steps[i..j].to_vec(),
            vertices: self.vertices[i..=j].to_vec(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct CongruenceGraph {
    vertices: BTreeSet<TermId>,
    edges: Vec<Edge>,
    adjacency: HashMap<TermId, Vec<EdgeId>>,
    components: UnionFind,
}

impl CongruenceGraph {
    pub fn with_vertices(vertices: impl IntoIterator<Item = TermId>) -> Self {
        let mut g = CongruenceGraph::default();
        for t in vertices {
            g.add_vertex(t);
        }
        g
    }

    pub fn add_vertex(&mut self, t: TermId) -> bool {
        self.components.ensure(t.index() + 1);
        self.vertices.insert(t)
    }

    pub fn contains(&self, t: TermId) -> bool {
        self.vertices.contains(&t)
    }

    pub fn vertices(&self) -> impl Iterator<Item = TermId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn incident(&self, t: TermId) -> &[EdgeId] {
        self.adjacency.get(&t).map_or(&[], Vec::as_slice)
    }

    pub fn connected(&self, s: TermId, t: TermId) -> bool {
        self.contains(s) && self.contains(t) && self.components.same(s.index(), t.index())
    }

    /// Adds `<u, v>`. Both endpoints must be vertices that are not yet
    /// connected, and every parent pair of a derived edge must already be
    /// connected.
    pub fn add_edge(&mut self, u: TermId, v: TermId, kind: EdgeKind) -> EdgeId {
        assert!(self.contains(u) && self.contains(v), "edge endpoints must be vertices");
        assert!(!self.connected(u, v), "edge would close a cycle");
        if let EdgeKind::Derived { parents } = &kind {
            assert!(
                parents.iter().all(|&(a, b)| self.connected(a, b) || a == b),
                "derived edge added before its parents are connected"
            );
        }
        let id = self.edges.len();
        self.edges.push(Edge { u, v, kind, seq: id });
        self.adjacency.entry(u).or_default().push(id);
        self.adjacency.entry(v).or_default().push(id);
        self.components.union(u.index(), v.index());
        id
    }

    /// Equivalence classes restricted to vertices, each sorted, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<TermId>> {
        let mut by_root: HashMap<usize, usize> = HashMap::new();
        let mut out: Vec<Vec<TermId>> = Vec::new();
        for t in self.vertices() {
            let root = self.components.root(t.index());
            let slot = *by_root.entry(root).or_insert_with(|| {
                out.push(Vec::new());
                out.len() - 1
            });
            out[slot].push(t);
        }
        out
    }

    /// The unique path from `u` to `v`.
    pub fn path(&self, u: TermId, v: TermId) -> Result<Path> {
        if !self.connected(u, v) {
            return Err(Error::NotConnected {
                from: format!("#{}", u.index()),
                to: format!("#{}", v.index()),
            });
        }
        if u == v {
            return Ok(Path::empty(u));
        }
        // BFS over the tree containing u.
        let mut pred: HashMap<TermId, (EdgeId, TermId)> = HashMap::new();
        let mut queue = VecDeque::from([u]);
        'search: while let Some(x) = queue.pop_front() {
            for &e in self.incident(x) {
                let y = self.edges[e].other(x);
                if y == u || pred.contains_key(&y) {
                    continue;
                }
                pred.insert(y, (e, x));
                if y == v {
                    break 'search;
                }
                queue.push_back(y);
            }
        }
        let mut steps = Vec::new();
        let mut vertices = vec![v];
        let mut cur = v;
        while cur != u {
            let (e, prev) = pred[&cur];
            steps.push(Step {
                edge: e,
                forward: self.edges[e].u == prev,
            });
            vertices.push(prev);
            cur = prev;
        }
        steps.reverse();
        vertices.reverse();
        Ok(Path {
            from: u,
            to: v,
            steps,
            vertices,
        })
    }

    /// Parent paths of a derived edge, one per argument position. Equal
    /// argument pairs yield empty paths.
    pub fn parent_paths(&self, e: EdgeId) -> Result<Vec<Path>> {
        match &self.edges[e].kind {
            EdgeKind::Derived { parents } => parents.iter().map(|&(a, b)| self.path(a, b)).collect(),
            EdgeKind::Basic { .. } => Ok(Vec::new()),
        }
    }

    /// Graphviz rendering. Basic edges are solid, derived edges dashed; with
    /// `colors`, A-edges are drawn filled and B-edges hollow.
    pub fn to_dot(&self, terms: &TermTable, colors: Option<&[Side]>) -> String {
        let mut out = String::from("graph congruence {\n  node [shape=box];\n");
        for t in self.vertices() {
            let _ = writeln!(
                out,
                "  n{} [label=\"{}\"];",
                t.index(),
                terms.display(t).to_string().replace('"', "\\\"")
            );
        }
        for e in &self.edges {
            let mut attrs = vec![];
            if e.is_derived() {
                attrs.push("style=dashed".to_owned());
            }
            match colors.map(|c| c[e.seq]) {
                Some(Side::A) => attrs.push("color=black, penwidth=2, label=A".into()),
                Some(Side::B) => attrs.push("color=\"black:white:black\", label=B".into()),
                None => {}
            }
            let _ = write!(
                out,
                "  n{} -- n{} [{}];",
                e.u.index(),
                e.v.index(),
                attrs.join(", ")
            );
            let pairs: Vec<String> = e
                .parent_pairs()
                .map(|(a, b)| format!("{} ~ {}", terms.display(a), terms.display(b)))
                .collect();
            if !pairs.is_empty() {
                let _ = write!(out, " // parents: {}", pairs.join(", "));
            }
            out.push('\n');
        }
        out.push_str("}\n");
        out
    }
}

type Signature = (SymbolId, Vec<usize>);

enum Reason {
    Basic(Origin),
    Congruence,
}

/// Runs congruence closure over `vertices` (which must be subterm-closed)
/// with the input equalities `eqs`.
///
/// Equalities are queued in input order; congruences discovered while
/// merging are queued behind them and the queue is processed FIFO.
pub fn close(terms: &TermTable, eqs: &[Equation], vertices: &[TermId]) -> Result<CongruenceGraph> {
    let mut g = CongruenceGraph::with_vertices(vertices.iter().copied());
    for t in vertices {
        if let Some(&a) = terms.args(*t).iter().find(|a| !g.contains(**a)) {
            return Err(Error::TermOutsideGraph {
                term: terms.to_string(a),
            });
        }
    }
    for eq in eqs {
        for t in [eq.lhs, eq.rhs] {
            if !g.contains(t) {
                return Err(Error::TermOutsideGraph {
                    term: terms.to_string(t),
                });
            }
        }
    }

    let n = terms.len();
    let mut uf = UnionFind::new(n);
    let mut uses: Vec<Vec<TermId>> = vec![Vec::new(); n];
    let mut table: HashMap<Signature, TermId> = HashMap::new();
    let mut pending: VecDeque<(TermId, TermId, Reason)> = eqs
        .iter()
        .map(|e| (e.lhs, e.rhs, Reason::Basic(e.origin)))
        .collect();

    let signature = |uf: &mut UnionFind, t: TermId| -> Signature {
        let data = terms.get(t);
        (data.head, data.args.iter().map(|a| uf.find(a.index())).collect())
    };

    for &t in vertices {
        let args = terms.args(t);
        if args.is_empty() {
            continue;
        }
        for a in args {
            uses[a.index()].push(t);
        }
        let sig = signature(&mut uf, t);
        table.entry(sig).or_insert(t);
    }

    while let Some((s, t, reason)) = pending.pop_front() {
        if uf.find(s.index()) == uf.find(t.index()) {
            continue;
        }
        let kind = match reason {
            Reason::Basic(origin) => EdgeKind::Basic { origin },
            Reason::Congruence => EdgeKind::Derived {
                parents: terms
                    .args(s)
                    .iter()
                    .copied()
                    .zip(terms.args(t).iter().copied())
                    .collect(),
            },
        };
        g.add_edge(s, t, kind);
        let (root, absorbed) = uf.union(s.index(), t.index()).expect("not yet merged");
        let moved = std::mem::take(&mut uses[absorbed]);
        for &p in &moved {
            let sig = signature(&mut uf, p);
            match table.get(&sig) {
                Some(&q) if uf.find(q.index()) != uf.find(p.index()) => {
                    pending.push_back((q, p, Reason::Congruence));
                }
                Some(_) => {}
                None => {
                    table.insert(sig, p);
                }
            }
        }
        uses[root].extend(moved);
    }
    Ok(g)
}

/// Input equalities of a problem, A first, in input order.
pub fn problem_equations(p: &ProblemInstance) -> Vec<Equation> {
    p.literals()
        .filter(|(_, _, l)| l.is_equality())
        .map(|(side, index, l)| Equation {
            lhs: l.lhs(),
            rhs: l.rhs(),
            origin: Origin { side, index },
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Refuted {
    pub literal: Literal,
    pub origin: Origin,
}

/// A disequality of the problem whose sides are connected in `g`. B
/// disequalities are preferred; within a set the first in input order wins.
pub fn find_refuted_disequality(g: &CongruenceGraph, p: &ProblemInstance) -> Option<Refuted> {
    [Side::B, Side::A].into_iter().find_map(|side| {
        p.side(side).iter().enumerate().find_map(|(index, l)| {
            (!l.is_equality() && g.connected(l.lhs(), l.rhs())).then_some(Refuted {
                literal: *l,
                origin: Origin { side, index },
            })
        })
    })
}
