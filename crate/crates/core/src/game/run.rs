use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use super::cut::ColoringCut;
use super::formula::Formula;
use super::proof::{LeafOrigin, NodeId, NodeKind, ProofTree};
use crate::error::{Error, Result};
use crate::term::Side;

/// The sets each prover contributes and, for every contributed node, the
/// nodes of the other prover it was derived from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpolationRun {
    pub s_a: BTreeSet<NodeId>,
    pub s_b: BTreeSet<NodeId>,
    /// For each node of `s_a`, the nodes of `s_b` it uses.
    pub pr_b: BTreeMap<NodeId, BTreeSet<NodeId>>,
    /// For each node of `s_b`, the nodes of `s_a` it uses.
    pub pr_a: BTreeMap<NodeId, BTreeSet<NodeId>>,
    pub root: NodeId,
}

/// Leaves of the piece of `p` rooted at `top`, a node of T_X, when `p` is
/// cut at the nodes of T_Y. Nodes of T_X below `top` are derived again.
fn piece_leaves(p: &ProofTree, top: NodeId, other: &BTreeSet<NodeId>) -> Vec<NodeId> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![top];
    let mut leaves = Vec::new();
    while let Some(id) = stack.pop() {
        if !seen.insert(id) {
            continue;
        }
        let is_cut = other.contains(&id);
        match &p.node(id).kind {
            NodeKind::Step(ps) if !is_cut => stack.extend(ps.iter().copied()),
            _ => leaves.push(id),
        }
    }
    leaves.sort_unstable();
    leaves
}

/// Splits `p` at the cut. The piece under a node of T_X may only rest on
/// inputs of X, axioms, and nodes of T_Y; those nodes are its premises in
/// the run.
pub fn run_from_cut(p: &ProofTree, cut: &ColoringCut) -> Result<InterpolationRun> {
    let mut pr = [BTreeMap::new(), BTreeMap::new()];
    for x in [Side::A, Side::B] {
        let y = x.other();
        for &top in cut.side(x) {
            let mut premises = BTreeSet::new();
            for leaf in piece_leaves(p, top, cut.side(y)) {
                if cut.side(y).contains(&leaf) {
                    premises.insert(leaf);
                    continue;
                }
                let ok = match p.node(leaf).kind {
                    NodeKind::Leaf(LeafOrigin::Input(side)) => side == x,
                    NodeKind::Leaf(LeafOrigin::Axiom) => true,
                    NodeKind::Step(_) => false,
                };
                if !ok {
                    return Err(Error::InvalidCut(format!(
                        "the piece under {} rests on {}",
                        p.label(top),
                        p.label(leaf)
                    )));
                }
            }
            // A piece for T_X lists its premises from T_Y, i.e. pr_Y.
            pr[y as usize].insert(top, premises);
        }
    }
    let [pr_a, pr_b] = pr;
    Ok(InterpolationRun {
        s_a: cut.t_a.clone(),
        s_b: cut.t_b.clone(),
        pr_b,
        pr_a,
        root: p.root(),
    })
}

/// `premises => conclusion` over proof formulas.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Implication {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

impl fmt::Display for Implication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.premises.is_empty() {
            return write!(f, "{}", self.conclusion);
        }
        f.write_str("(=> (and")?;
        for p in &self.premises {
            write!(f, " {p}")?;
        }
        write!(f, ") {})", self.conclusion)
    }
}

/// A deduplicated conjunction of implications.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GameInterpolant(pub BTreeSet<Implication>);

impl fmt::Display for GameInterpolant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("true");
        }
        f.write_str("(and")?;
        for i in &self.0 {
            write!(f, " {i}")?;
        }
        f.write_str(")")
    }
}

impl InterpolationRun {
    pub fn pr_a(&self, beta: NodeId) -> &BTreeSet<NodeId> {
        &self.pr_a[&beta]
    }

    pub fn pr_b(&self, alpha: NodeId) -> &BTreeSet<NodeId> {
        &self.pr_b[&alpha]
    }

    /// `beta` together with, recursively, every node of S_B used by an
    /// S_A-premise of `beta`.
    pub fn cumulative(&self, beta: NodeId) -> BTreeSet<NodeId> {
        let mut out = BTreeSet::new();
        let mut stack = vec![beta];
        while let Some(b) = stack.pop() {
            if out.insert(b) {
                for a in self.pr_a(b) {
                    stack.extend(self.pr_b(*a).iter().copied());
                }
            }
        }
        out
    }

    /// The partial interpolant of `beta`: `pr_b(alpha) => alpha` for each
    /// S_A-premise `alpha` of the cumulative premises of `beta`.
    pub fn partial_interpolant(&self, p: &ProofTree, beta: NodeId) -> GameInterpolant {
        let alphas: BTreeSet<NodeId> = self
            .cumulative(beta)
            .into_iter()
            .flat_map(|b| self.pr_a(b).iter().copied())
            .collect();
        GameInterpolant(
            alphas
                .into_iter()
                .map(|a| Implication {
                    premises: self.pr_b(a).iter().map(|&b| p.label(b).clone()).collect(),
                    conclusion: p.label(a).clone(),
                })
                .collect(),
        )
    }

    pub fn interpolant(&self, p: &ProofTree) -> GameInterpolant {
        self.partial_interpolant(p, self.root)
    }

    /// Length of the longest premise chain ending at the root, counting
    /// nodes.
    pub fn rounds(&self) -> usize {
        fn depth(r: &InterpolationRun, id: NodeId, memo: &mut HashMap<NodeId, usize>) -> usize {
            if let Some(&d) = memo.get(&id) {
                return d;
            }
            let under = r.pr_a.get(&id).or_else(|| r.pr_b.get(&id)).expect("run node");
            let d = 1 + under.iter().map(|&u| depth(r, u, memo)).max().unwrap_or(0);
            memo.insert(id, d);
            d
        }
        depth(self, self.root, &mut HashMap::new())
    }
}

/// Everything produced by playing the game on a refutation.
#[derive(Debug, Clone)]
pub struct GameResult {
    /// The refutation after root normalization; node ids below refer to it.
    pub proof: ProofTree,
    pub cut: ColoringCut,
    pub run: InterpolationRun,
    pub interpolant: GameInterpolant,
}

/// Normalizes the root, builds and checks the cut, and extracts the run and
/// its interpolant.
pub fn play(p: &ProofTree) -> Result<GameResult> {
    if !p.check_local() {
        return Err(Error::Proof("the refutation is not local".into()));
    }
    let proof = p.normalize_root();
    let cut = super::cut::coloring_cut(&proof);
    super::cut::check_cut(&proof, &cut).map_err(Error::InvalidCut)?;
    let run = run_from_cut(&proof, &cut)?;
    let interpolant = run.interpolant(&proof);
    Ok(GameResult {
        proof,
        cut,
        run,
        interpolant,
    })
}
