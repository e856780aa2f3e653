use std::collections::BTreeSet;

use super::proof::{NodeId, ProofTree};
use crate::term::Side;

/// Two sets of AB-colorable nodes along which a local refutation splits
/// into single-colored pieces.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ColoringCut {
    pub t_a: BTreeSet<NodeId>,
    pub t_b: BTreeSet<NodeId>,
}

impl ColoringCut {
    pub fn side(&self, side: Side) -> &BTreeSet<NodeId> {
        match side {
            Side::A => &self.t_a,
            Side::B => &self.t_b,
        }
    }

    fn side_mut(&mut self, side: Side) -> &mut BTreeSet<NodeId> {
        match side {
            Side::A => &mut self.t_a,
            Side::B => &mut self.t_b,
        }
    }
}

/// Whether some premise of `id` is not `side`-colorable.
fn has_foreign_parent(p: &ProofTree, id: NodeId, side: Side) -> bool {
    p.node(id).premises().iter().any(|&q| !p.colorability(q).is(side))
}

/// Builds a cut from the root down. The root goes to T_B. From a node of
/// T_X, premises are followed until an AB-colorable node is reached that is
/// a leaf of Y (Y the other side) or has a premise that is not X-colorable;
/// that node joins T_Y and is expanded in turn.
///
/// On a tree this is the maximal cut: a node enters exactly when no such
/// node lies strictly between it and its cut ancestor. On a DAG every path
/// is followed, so no piece rests on an uncut node of the other side.
///
/// Expects a local proof with a normalized root.
pub fn coloring_cut(p: &ProofTree) -> ColoringCut {
    let enters = |i: NodeId, y: Side| {
        p.colorability(i).is_ab() && (has_foreign_parent(p, i, y.other()) || p.node(i).is_leaf_of(y))
    };
    let mut cut = ColoringCut::default();
    cut.t_b.insert(p.root());
    let mut frontier = vec![(p.root(), Side::B)];
    while let Some((top, x)) = frontier.pop() {
        let y = x.other();
        let mut seen = BTreeSet::new();
        let mut stack = p.node(top).premises().to_vec();
        while let Some(phi) = stack.pop() {
            if !seen.insert(phi) {
                continue;
            }
            if enters(phi, y) {
                if cut.side_mut(y).insert(phi) {
                    frontier.push((phi, y));
                }
            } else {
                stack.extend(p.node(phi).premises().iter().copied());
            }
        }
    }
    cut
}

/// Evaluates the four cut conditions on the tree unfolding of `p`.
///
/// An occurrence of a node of T_Y counts as cut when its nearest cut
/// ancestor occurrence belongs to T_X; other occurrences lie inside a piece
/// and are derived there again. Conditions (3) and (4) then say that no
/// input of Y lies in a T_X piece and that every node of T_A and T_B has a
/// cut occurrence. On a proof whose labels each occur once in the unfolding
/// this is the definition read literally. Returns the first violation.
pub fn check_cut(p: &ProofTree, cut: &ColoringCut) -> Result<(), String> {
    let name = |i: NodeId| p.label(i).to_string();
    let condition = |x: Side| if x == Side::A { 3 } else { 4 };

    if let Some(&i) = cut.t_a.iter().chain(&cut.t_b).find(|&&i| !p.colorability(i).is_ab()) {
        return Err(format!("(1) {} is not AB-colorable", name(i)));
    }
    if let Some(&i) = cut.t_a.intersection(&cut.t_b).next() {
        return Err(format!("(2) {} is in both sets", name(i)));
    }
    if !cut.t_b.contains(&p.root()) {
        return Err("(2) false is not in T_B".to_owned());
    }

    // `(node, x)`: the premises of `node` lie in a piece under T_x.
    let mut expanded: BTreeSet<(NodeId, Side)> = BTreeSet::new();
    let mut cut_occurrence: BTreeSet<NodeId> = BTreeSet::new();
    let mut stack = vec![(p.root(), Side::B)];
    while let Some((node, x)) = stack.pop() {
        if !expanded.insert((node, x)) {
            continue;
        }
        let y = x.other();
        for &q in p.node(node).premises() {
            if cut.side(y).contains(&q) {
                cut_occurrence.insert(q);
                stack.push((q, y));
            } else if p.node(q).is_leaf_of(y) {
                return Err(format!(
                    "({}) nothing in T_{y} separates the input {} from the piece above it",
                    condition(x),
                    name(q)
                ));
            } else {
                stack.push((q, x));
            }
        }
    }
    for x in [Side::A, Side::B] {
        if let Some(&i) = cut.side(x).iter().find(|&&i| i != p.root() && !cut_occurrence.contains(&i)) {
            return Err(format!(
                "({}) nothing in T_{} separates {} from the T_{x} node above it",
                condition(x),
                x.other(),
                name(i)
            ));
        }
    }
    Ok(())
}
