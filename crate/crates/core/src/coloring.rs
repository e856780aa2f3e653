//! Making congruence graphs colorable, coloring their edges and splitting
//! paths into single-colored factors.

use crate::congruence::{CongruenceGraph, EdgeId, EdgeKind, Path};
use crate::error::{Error, Result};
use crate::term::{Colorability, ColorTable, Side, TermId, TermTable};

/// A colorable graph together with the terms the repair had to introduce.
#[derive(Debug, Clone)]
pub struct Repair {
    pub graph: CongruenceGraph,
    pub new_vertices: Vec<TermId>,
}

/// First AB-colorable vertex of `path`, scanning from its start.
pub fn choose_splitter(path: &Path, colors: &ColorTable) -> Option<TermId> {
    path.vertices.iter().copied().find(|&v| colors.term(v).is_ab())
}

/// Rebuilds `g` so that every edge is colorable.
///
/// The edges of `g` are replayed in creation order into a fresh graph.
/// Colorable edges are copied. An uncolorable derived edge
/// `<f(u..), f(v..)>`, with `f(u..)` the A-colorable side, is routed through
/// `m = f(w..)` where each `w_i` is the splitter of the replayed parent path
/// `u_i..v_i`; only the edges needed to join `f(u..)`, `m` and `f(v..)` are
/// added, so an `m` that is already present is reused. Edges whose endpoints
/// the replay has already connected are dropped.
///
/// New terms are interned into `terms` and classified in `colors`.
pub fn make_colorable(
    g: &CongruenceGraph,
    terms: &mut TermTable,
    colors: &mut ColorTable,
) -> Result<Repair> {
    let mut out = CongruenceGraph::with_vertices(g.vertices());
    let mut new_vertices = Vec::new();

    for edge in g.edges() {
        if out.connected(edge.u, edge.v) {
            continue;
        }
        if colors.edge(edge.u, edge.v).is_colorable() {
            out.add_edge(edge.u, edge.v, edge.kind.clone());
            continue;
        }
        let EdgeKind::Derived { .. } = edge.kind else {
            return Err(Error::Uncolorable { edge: edge.seq });
        };
        let (fu, fv) = if colors.term(edge.u).is_a() {
            (edge.u, edge.v)
        } else {
            (edge.v, edge.u)
        };
        assert!(
            colors.term(fu).is_a() && colors.term(fv).is_b(),
            "uncolorable edge between uncolorable vertices"
        );
        let us = terms.args(fu).to_vec();
        let vs = terms.args(fv).to_vec();
        let mut ws = Vec::with_capacity(us.len());
        for (&u, &v) in us.iter().zip(&vs) {
            let p = out.path(u, v)?;
            let w = choose_splitter(&p, colors)
                .expect("parent path of a minimal uncolorable edge has an AB-colorable vertex");
            ws.push(w);
        }
        let m = terms.intern(terms.head(fu), ws.clone());
        colors.extend(terms);
        debug_assert!(colors.term(m).is_ab());

        let left = EdgeKind::Derived {
            parents: us.iter().copied().zip(ws.iter().copied()).collect(),
        };
        let right = EdgeKind::Derived {
            parents: ws.iter().copied().zip(vs.iter().copied()).collect(),
        };
        if out.add_vertex(m) {
            new_vertices.push(m);
        }
        let joined_left = out.connected(fu, m);
        let joined_right = out.connected(m, fv);
        if !joined_left {
            out.add_edge(fu, m, left);
        }
        if !joined_right {
            out.add_edge(m, fv, right);
        }
    }
    Ok(Repair {
        graph: out,
        new_vertices,
    })
}

/// How AB-colorable derived edges, the only edges with a free color, are
/// colored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Each free edge, in creation order, takes the majority color of the
    /// already colored edges sharing an endpoint with it; A on a tie.
    #[default]
    Greedy,
    AllA,
    AllB,
}

#[derive(Debug, Clone)]
pub struct ColoredGraph {
    pub graph: CongruenceGraph,
    colors: Vec<Side>,
}

impl ColoredGraph {
    pub fn color(&self, e: EdgeId) -> Side {
        self.colors[e]
    }

    pub fn colors(&self) -> &[Side] {
        &self.colors
    }

    /// Checks the two coloring rules on every edge. Returns the offending
    /// edge on failure.
    pub fn validate(&self, colors: &ColorTable) -> std::result::Result<(), EdgeId> {
        for e in self.graph.edges() {
            let c = self.colors[e.seq];
            let forced_ok = match e.kind {
                EdgeKind::Basic { origin } => origin.side == c,
                EdgeKind::Derived { .. } => true,
            };
            if !forced_ok || !colors.edge(e.u, e.v).is(c) {
                return Err(e.seq);
            }
        }
        Ok(())
    }

    pub fn to_dot(&self, terms: &TermTable) -> String {
        self.graph.to_dot(terms, Some(&self.colors))
    }
}

/// Colors a colorable graph.
pub fn color(graph: CongruenceGraph, colors: &ColorTable, strategy: Strategy) -> Result<ColoredGraph> {
    let mut assigned: Vec<Option<Side>> = Vec::with_capacity(graph.edges().len());
    let mut free = Vec::new();
    for e in graph.edges() {
        let c = match e.kind {
            EdgeKind::Basic { origin } => Some(origin.side),
            EdgeKind::Derived { .. } => match colors.edge(e.u, e.v) {
                Colorability::AOnly => Some(Side::A),
                Colorability::BOnly => Some(Side::B),
                Colorability::AB => {
                    free.push(e.seq);
                    None
                }
                Colorability::None => return Err(Error::Uncolorable { edge: e.seq }),
            },
        };
        assigned.push(c);
    }
    for e in free {
        let c = match strategy {
            Strategy::AllA => Side::A,
            Strategy::AllB => Side::B,
            Strategy::Greedy => {
                let edge = graph.edge(e);
                let (mut a, mut b) = (0usize, 0usize);
                for v in [edge.u, edge.v] {
                    for &n in graph.incident(v) {
                        match assigned[n] {
                            Some(Side::A) if n != e => a += 1,
                            Some(Side::B) if n != e => b += 1,
                            _ => {}
                        }
                    }
                }
                if b > a {
                    Side::B
                } else {
                    Side::A
                }
            }
        };
        assigned[e] = Some(c);
    }
    Ok(ColoredGraph {
        graph,
        colors: assigned.into_iter().map(|c| c.expect("every edge colored")).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub color: Side,
    pub path: Path,
}

/// Splits a nonempty path into maximal single-colored subpaths.
pub fn factorize(cg: &ColoredGraph, path: &Path) -> Result<Vec<Factor>> {
    if path.is_empty() {
        return Err(Error::EmptyPath);
    }
    let mut factors = Vec::new();
    let mut start = 0;
    for i in 1..=path.len() {
        let here = cg.color(path.steps[i - 1].edge);
        if i == path.len() || cg.color(path.steps[i].edge) != here {
            factors.push(Factor {
                color: here,
                path: path.slice(start, i),
            });
            start = i;
        }
    }
    Ok(factors)
}
