//! Refutation proofs with one node per distinct formula.
//!
//! Text format:
//!
//! ```text
//! (theory-symbols r t)                 ; optional, first
//! (node n1 false (premises n2 n3))
//! (node n2 (p a) (from A))             ; leaf of A, B, or `axiom`
//! ```
//!
//! Nodes may be listed in any order. Nodes with equal formulas must have
//! equal derivations and are merged; nodes not reachable from the node
//! labelled `false` are dropped.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use super::formula::Formula;
use crate::error::{Error, Result};
use crate::sexp::{self, Sexp};
use crate::term::{Colorability, Side};

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LeafOrigin {
    Input(Side),
    Axiom,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Leaf(LeafOrigin),
    Step(Vec<NodeId>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub label: Formula,
    pub kind: NodeKind,
}

impl Node {
    pub fn premises(&self) -> &[NodeId] {
        match &self.kind {
            NodeKind::Step(ps) => ps,
            NodeKind::Leaf(_) => &[],
        }
    }

    pub fn is_leaf_of(&self, side: Side) -> bool {
        self.kind == NodeKind::Leaf(LeafOrigin::Input(side))
    }
}

/// A proof DAG whose premises always precede their conclusions, so node ids
/// are a topological order and the root is the last node.
#[derive(Debug, Clone)]
pub struct ProofTree {
    nodes: Vec<Node>,
    by_label: HashMap<Formula, NodeId>,
    theory: BTreeSet<String>,
    sigma: [BTreeSet<String>; 2],
}

/// Incremental construction of a [`ProofTree`].
#[derive(Debug, Clone, Default)]
pub struct ProofBuilder {
    nodes: Vec<Node>,
    by_label: HashMap<Formula, NodeId>,
}

impl ProofBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn find(&self, label: &Formula) -> Option<NodeId> {
        self.by_label.get(label).copied()
    }

    /// Adds a node, or returns the existing node with the same label if its
    /// derivation is the same.
    pub fn add(&mut self, label: Formula, kind: NodeKind) -> Result<NodeId> {
        if let NodeKind::Step(ps) = &kind {
            assert!(ps.iter().all(|&p| p < self.nodes.len()), "premises must exist");
        }
        if let Some(&id) = self.by_label.get(&label) {
            return if self.nodes[id].kind == kind {
                Ok(id)
            } else {
                Err(Error::Proof(format!("{label} has two different derivations")))
            };
        }
        let id = self.nodes.len();
        self.by_label.insert(label.clone(), id);
        self.nodes.push(Node { label, kind });
        Ok(id)
    }

    /// Finishes the proof at `root`, keeping only nodes reachable from it.
    /// With `sigma` unset, the symbols of each side are read off its leaves.
    pub fn finish(
        self,
        root: NodeId,
        theory: BTreeSet<String>,
        sigma: Option<[BTreeSet<String>; 2]>,
    ) -> ProofTree {
        let mut keep = vec![false; self.nodes.len()];
        keep[root] = true;
        for id in (0..=root).rev() {
            if keep[id] {
                for &p in self.nodes[id].premises() {
                    keep[p] = true;
                }
            }
        }
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (old, node) in self.nodes.into_iter().enumerate().take(root + 1) {
            if !keep[old] {
                continue;
            }
            remap[old] = nodes.len();
            let kind = match node.kind {
                NodeKind::Step(ps) => NodeKind::Step(ps.iter().map(|&p| remap[p]).collect()),
                leaf => leaf,
            };
            nodes.push(Node {
                label: node.label,
                kind,
            });
        }
        let by_label = nodes.iter().enumerate().map(|(i, n)| (n.label.clone(), i)).collect();
        let sigma = sigma.unwrap_or_else(|| {
            let mut sigma: [BTreeSet<String>; 2] = Default::default();
            for n in &nodes {
                if let NodeKind::Leaf(LeafOrigin::Input(side)) = n.kind {
                    sigma[side as usize].extend(n.label.free_symbols(&theory));
                }
            }
            sigma
        });
        ProofTree {
            nodes,
            by_label,
            theory,
            sigma,
        }
    }
}

enum RawKind<'a> {
    Leaf(LeafOrigin),
    Step(&'a [Sexp]),
}

impl ProofTree {
    pub fn parse(text: &str) -> Result<ProofTree> {
        let items = sexp::parse_all(text)?;
        let mut theory = BTreeSet::new();
        let mut raw: HashMap<&str, (Formula, RawKind)> = HashMap::new();
        let mut root_id = None;
        for (i, item) in items.iter().enumerate() {
            match item.head() {
                Some("theory-symbols") if i == 0 => {
                    for s in &item.list().unwrap()[1..] {
                        theory.insert(s.atom().ok_or_else(|| s.error("expected a symbol"))?.to_owned());
                    }
                }
                Some("node") => {
                    let Some([_, id, formula, how]) = item.list() else {
                        return Err(item.error("expected `(node ID FORMULA (from ..))` or `(node ID FORMULA (premises ..))`"));
                    };
                    let id = id.atom().ok_or_else(|| id.error("expected a node id"))?;
                    let kind = match (how.head(), how.list()) {
                        (Some("from"), Some([_, origin])) => RawKind::Leaf(match origin.atom() {
                            Some("A") => LeafOrigin::Input(Side::A),
                            Some("B") => LeafOrigin::Input(Side::B),
                            Some("axiom") => LeafOrigin::Axiom,
                            _ => return Err(origin.error("expected A, B or axiom")),
                        }),
                        (Some("premises"), Some([_, ps @ ..])) if !ps.is_empty() => RawKind::Step(ps),
                        _ => return Err(how.error("expected `(from A|B|axiom)` or `(premises ID+)`")),
                    };
                    let formula = Formula::from(formula);
                    if formula.is_atom("false") && root_id.is_none() {
                        root_id = Some(id);
                    }
                    if raw.insert(id, (formula, kind)).is_some() {
                        return Err(item.error(format!("duplicate node id `{id}`")));
                    }
                }
                _ => return Err(item.error("expected `(node ...)`")),
            }
        }
        let root_id = root_id.ok_or_else(|| Error::Proof("no node is labelled false".into()))?;

        // Depth-first from the root; premises are added before conclusions.
        let mut builder = ProofBuilder::new();
        let mut done: HashMap<&str, NodeId> = HashMap::new();
        let mut on_stack: BTreeSet<&str> = BTreeSet::new();
        fn visit<'a>(
            id: &'a str,
            raw: &HashMap<&'a str, (Formula, RawKind<'a>)>,
            builder: &mut ProofBuilder,
            done: &mut HashMap<&'a str, NodeId>,
            on_stack: &mut BTreeSet<&'a str>,
        ) -> Result<NodeId> {
            if let Some(&n) = done.get(id) {
                return Ok(n);
            }
            if !on_stack.insert(id) {
                return Err(Error::Proof(format!("node `{id}` depends on itself")));
            }
            let (label, kind) = raw
                .get(id)
                .ok_or_else(|| Error::Proof(format!("unknown node `{id}`")))?;
            let kind = match kind {
                RawKind::Leaf(o) => NodeKind::Leaf(*o),
                RawKind::Step(ps) => {
                    let mut ids = Vec::with_capacity(ps.len());
                    for p in *ps {
                        let pid = p.atom().ok_or_else(|| p.error("expected a node id"))?;
                        ids.push(visit(pid, raw, builder, done, on_stack)?);
                    }
                    NodeKind::Step(ids)
                }
            };
            let n = builder.add(label.clone(), kind)?;
            on_stack.remove(id);
            done.insert(id, n);
            Ok(n)
        }
        let root = visit(root_id, &raw, &mut builder, &mut done, &mut on_stack)?;
        Ok(builder.finish(root, theory, None))
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn label(&self, id: NodeId) -> &Formula {
        &self.nodes[id].label
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.nodes.len() - 1
    }

    pub fn find(&self, label: &Formula) -> Option<NodeId> {
        self.by_label.get(label).copied()
    }

    pub fn theory(&self) -> &BTreeSet<String> {
        &self.theory
    }

    pub fn sigma(&self, side: Side) -> &BTreeSet<String> {
        &self.sigma[side as usize]
    }

    pub fn colorability(&self, id: NodeId) -> Colorability {
        let syms = self.nodes[id].label.free_symbols(&self.theory);
        Colorability::from_flags(
            syms.is_subset(&self.sigma[0]),
            syms.is_subset(&self.sigma[1]),
        )
    }

    /// Whether every inference step is entirely A-colorable or entirely
    /// B-colorable.
    pub fn check_local(&self) -> bool {
        self.nodes.iter().enumerate().all(|(id, n)| {
            let NodeKind::Step(ps) = &n.kind else {
                return true;
            };
            [Side::A, Side::B].into_iter().any(|side| {
                self.colorability(id).is(side) && ps.iter().all(|&p| self.colorability(p).is(side))
            })
        })
    }

    /// Ensures the root is derived by a B-colorable step: otherwise the root
    /// is renamed `false'` and `false` is derived from it in one more step.
    pub fn normalize_root(&self) -> ProofTree {
        let root = self.root();
        let needs = match &self.nodes[root].kind {
            NodeKind::Step(ps) => ps.iter().any(|&p| !self.colorability(p).is_b()),
            NodeKind::Leaf(o) => *o == LeafOrigin::Input(Side::A),
        };
        if !needs {
            return self.clone();
        }
        let mut out = self.clone();
        let primed = Formula::atom("false'");
        out.by_label.remove(&out.nodes[root].label);
        out.nodes[root].label = primed.clone();
        out.by_label.insert(primed, root);
        out.nodes.push(Node {
            label: Formula::atom("false"),
            kind: NodeKind::Step(vec![root]),
        });
        out.by_label.insert(Formula::atom("false"), root + 1);
        out
    }

    /// `m[i][j]` iff node `i` is a transitive premise of node `j`.
    #[allow(clippy::needless_range_loop)]
    pub fn ancestry(&self) -> Vec<Vec<bool>> {
        let n = self.nodes.len();
        let mut m = vec![vec![false; n]; n];
        for j in 0..n {
            for &p in self.nodes[j].premises() {
                m[p][j] = true;
                for i in 0..p {
                    if m[i][p] {
                        m[i][j] = true;
                    }
                }
            }
        }
        m
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.theory.is_empty() {
            let syms: Vec<&str> = self.theory.iter().map(String::as_str).collect();
            let _ = writeln!(out, "(theory-symbols {})", syms.join(" "));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            let how = match &n.kind {
                NodeKind::Leaf(LeafOrigin::Input(side)) => format!("(from {side})"),
                NodeKind::Leaf(LeafOrigin::Axiom) => "(from axiom)".to_owned(),
                NodeKind::Step(ps) => {
                    let ids: Vec<String> = ps.iter().map(|p| format!("n{p}")).collect();
                    format!("(premises {})", ids.join(" "))
                }
            };
            let _ = writeln!(out, "(node n{i} {} {how})", n.label);
        }
        out
    }
}
