//! Path interpolants over a colored congruence graph and the end-to-end
//! interpolation procedure.
//!
//! Paths are identified by their endpoints: the graph is a forest, so two
//! vertices are joined by at most one path. For a path `p`:
//!
//! * `premises(B, p)` are the B-paths whose equalities, together with A,
//!   give the equality of `p`; `premises(A, p)` is the dual.
//! * `justification(p)` is the clause `premises(B, p) => p`.
//! * `cumulative(p)` is `{p}` plus the cumulative premises of every
//!   B-premise of every A-premise of `p`.
//! * `interpolant(p)` collects the justifications of the A-premises of
//!   `cumulative(p)`; `interpolant_recursive` computes the same set by
//!   recursion over factors and parent paths.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::coloring::{color, factorize, make_colorable, ColoredGraph, Factor, Strategy};
use crate::congruence::{close, find_refuted_disequality, problem_equations, Path, Refuted};
use crate::error::{Error, Result};
use crate::horn::{Conclusion, HornClause, HornConjunction};
use crate::problem::ProblemInstance;
use crate::term::{ColorTable, Literal, Side, TermId, TermTable};

/// Endpoints of a path, smaller id first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathKey {
    pub from: TermId,
    pub to: TermId,
}

impl PathKey {
    pub fn new(a: TermId, b: TermId) -> Self {
        PathKey {
            from: a.min(b),
            to: a.max(b),
        }
    }

    pub fn of(path: &Path) -> Self {
        Self::new(path.from, path.to)
    }

    pub fn is_empty(&self) -> bool {
        self.from == self.to
    }

    pub fn equality(&self) -> Literal {
        Literal::eq(self.from, self.to)
    }
}

type PathSet = BTreeSet<PathKey>;

/// Memoized interpolation functions over one colored graph.
pub struct Interpolator<'g> {
    cg: &'g ColoredGraph,
    colors: &'g ColorTable,
    factors: HashMap<PathKey, Vec<Factor>>,
    premises: [HashMap<PathKey, PathSet>; 2],
    cumulative: HashMap<PathKey, PathSet>,
    recursive: HashMap<PathKey, HornConjunction>,
    active: HashSet<(u8, PathKey)>,
}

impl<'g> Interpolator<'g> {
    pub fn new(cg: &'g ColoredGraph, colors: &'g ColorTable) -> Self {
        Interpolator {
            cg,
            colors,
            factors: HashMap::new(),
            premises: [HashMap::new(), HashMap::new()],
            cumulative: HashMap::new(),
            recursive: HashMap::new(),
            active: HashSet::new(),
        }
    }

    pub fn graph(&self) -> &ColoredGraph {
        self.cg
    }

    fn enter(&mut self, tag: u8, key: PathKey) {
        assert!(self.active.insert((tag, key)), "recursion is not well-founded at {key:?}");
    }

    fn leave(&mut self, tag: u8, key: PathKey) {
        self.active.remove(&(tag, key));
    }

    pub fn path(&self, key: PathKey) -> Path {
        self.cg.graph.path(key.from, key.to).expect("path keys name connected vertices")
    }

    /// Factorization of a nonempty path, oriented from `key.from`.
    pub fn factors(&mut self, key: PathKey) -> Vec<Factor> {
        if let Some(f) = self.factors.get(&key) {
            return f.clone();
        }
        let f = factorize(self.cg, &self.path(key)).expect("nonempty path");
        self.factors.insert(key, f.clone());
        f
    }

    /// Nonempty parent paths of the edges of a path.
    fn parents(&self, path: &Path) -> Vec<PathKey> {
        path.steps
            .iter()
            .flat_map(|s| self.cg.graph.edge(s.edge).parent_pairs())
            .map(|(a, b)| PathKey::new(a, b))
            .collect()
    }

    /// `premises(B, p)` is the B-premise set, `premises(A, p)` the A-premise set.
    pub fn premises(&mut self, side: Side, key: PathKey) -> PathSet {
        if key.is_empty() {
            return PathSet::new();
        }
        let slot = side as usize;
        if let Some(s) = self.premises[slot].get(&key) {
            return s.clone();
        }
        self.enter(slot as u8, key);
        let factors = self.factors(key);
        let mut out = PathSet::new();
        if factors.len() >= 2 {
            for f in &factors {
                out.extend(self.premises(side, PathKey::of(&f.path)));
            }
        } else if factors[0].color == side {
            out.insert(key);
        } else {
            for parent in self.parents(&factors[0].path) {
                out.extend(self.premises(side, parent));
            }
        }
        self.leave(slot as u8, key);
        self.premises[slot].insert(key, out.clone());
        out
    }

    pub fn b_premises(&mut self, key: PathKey) -> PathSet {
        self.premises(Side::B, key)
    }

    pub fn a_premises(&mut self, key: PathKey) -> PathSet {
        self.premises(Side::A, key)
    }

    /// `premises(B, p) => p`; `None` for an empty path.
    pub fn justification(&mut self, key: PathKey) -> Option<HornClause> {
        if key.is_empty() {
            return None;
        }
        let prem = self.b_premises(key);
        HornClause::new(
            prem.iter().map(PathKey::equality),
            Conclusion::Literal(key.equality()),
        )
    }

    pub fn cumulative(&mut self, key: PathKey) -> PathSet {
        if let Some(s) = self.cumulative.get(&key) {
            return s.clone();
        }
        self.enter(2, key);
        let mut out = PathSet::from([key]);
        for a in self.a_premises(key) {
            for b in self.b_premises(a) {
                out.extend(self.cumulative(b));
            }
        }
        self.leave(2, key);
        self.cumulative.insert(key, out.clone());
        out
    }

    /// Path interpolant as the justifications of the A-premises of the
    /// cumulative premises.
    pub fn interpolant(&mut self, key: PathKey) -> HornConjunction {
        let mut sigmas = PathSet::new();
        for p in self.cumulative(key) {
            sigmas.extend(self.a_premises(p));
        }
        let mut h = HornConjunction::new();
        for s in sigmas {
            h.insert(self.justification(s));
        }
        h
    }

    /// Path interpolant by direct recursion: the union over factors for a
    /// multi-factor path, over parent paths for a B-path, and the
    /// justification plus the interpolants of the B-premises for an A-path.
    pub fn interpolant_recursive(&mut self, key: PathKey) -> HornConjunction {
        if key.is_empty() {
            return HornConjunction::new();
        }
        if let Some(h) = self.recursive.get(&key) {
            return h.clone();
        }
        self.enter(3, key);
        let factors = self.factors(key);
        let mut h = HornConjunction::new();
        if factors.len() >= 2 {
            for f in &factors {
                h.union(&self.interpolant_recursive(PathKey::of(&f.path)));
            }
        } else if factors[0].color == Side::B {
            for parent in self.parents(&factors[0].path) {
                h.union(&self.interpolant_recursive(parent));
            }
        } else {
            h.insert(self.justification(key));
            for b in self.b_premises(key) {
                h.union(&self.interpolant_recursive(b));
            }
        }
        self.leave(3, key);
        self.recursive.insert(key, h.clone());
        h
    }

    /// Interpolant for a refuted disequality of A along `path`.
    ///
    /// `path` is split as `p1 theta p2` where `theta` runs between the first
    /// and last B-colorable vertices. The result is the interpolant of
    /// `theta`, the interpolants of the B-premises of `p1` and `p2`, and the
    /// clause from those B-premises to the negation of `theta` (to `false`
    /// when `theta` is empty).
    pub fn interpolant_prime(&mut self, path: &Path) -> HornConjunction {
        let b_vertices: Vec<usize> = (0..path.vertices.len())
            .filter(|&i| self.colors.term(path.vertices[i]).is_b())
            .collect();
        let (first, last) = match (b_vertices.first(), b_vertices.last()) {
            (Some(&i), Some(&j)) => (i, j),
            _ => (path.len(), path.len()),
        };
        let p1 = PathKey::of(&path.slice(0, first));
        let theta = PathKey::of(&path.slice(first, last));
        let p2 = PathKey::of(&path.slice(last, path.len()));

        let mut side = self.b_premises(p1);
        side.extend(self.b_premises(p2));
        let mut h = self.interpolant(theta);
        for &t in &side {
            h.union(&self.interpolant(t));
        }
        let conclusion = if theta.is_empty() {
            Conclusion::False
        } else {
            Conclusion::Literal(theta.equality().negate())
        };
        h.insert(HornClause::new(side.iter().map(PathKey::equality), conclusion));
        h
    }

    /// Every path whose B- or A-premises have been computed so far.
    pub fn visited(&self) -> BTreeSet<PathKey> {
        self.premises[0]
            .keys()
            .chain(self.premises[1].keys())
            .copied()
            .collect()
    }
}

/// Result of [`interpolate`].
#[derive(Debug, Clone)]
pub struct Outcome {
    /// Problem terms plus any terms introduced by the repair.
    pub terms: TermTable,
    pub colors: ColorTable,
    pub formula: HornConjunction,
    pub refuted: Refuted,
    pub new_vertices: Vec<TermId>,
    /// Number of factors on the path between the sides of the refuted
    /// disequality.
    pub factors: usize,
    pub graph: ColoredGraph,
}

impl Outcome {
    pub fn display(&self) -> String {
        self.formula.display(&self.terms).to_string()
    }
}

/// Computes an interpolant for a jointly unsatisfiable problem.
pub fn interpolate(p: &ProblemInstance, strategy: Strategy) -> Result<Outcome> {
    let g = close(&p.terms, &problem_equations(p), &p.term_set())?;
    let Some(refuted) = find_refuted_disequality(&g, p) else {
        return Err(Error::NotUnsatisfiable {
            partition: g
                .components()
                .into_iter()
                .map(|c| c.into_iter().map(|t| p.terms.to_string(t)).collect())
                .collect(),
        });
    };
    let mut terms = p.terms.clone();
    let mut colors = ColorTable::new(&terms);
    let repair = make_colorable(&g, &mut terms, &mut colors)?;
    let cg = color(repair.graph, &colors, strategy)?;
    debug_assert!(cg.validate(&colors).is_ok());

    let (s, t) = (refuted.literal.lhs(), refuted.literal.rhs());
    let mut formula = HornConjunction::new();
    let mut factors = 0;
    if s == t {
        if refuted.origin.side == Side::A {
            formula.insert(HornClause::fact(Conclusion::False));
        }
    } else {
        let path = cg.graph.path(s, t)?;
        factors = factorize(&cg, &path)?.len();
        let mut ip = Interpolator::new(&cg, &colors);
        formula = match refuted.origin.side {
            Side::B => ip.interpolant(PathKey::of(&path)),
            Side::A => ip.interpolant_prime(&path),
        };
    }
    Ok(Outcome {
        terms,
        colors,
        formula,
        refuted,
        new_vertices: repair.new_vertices,
        factors,
        graph: cg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::parse_problem;

    const FREE_EDGE: &str = "(A (= x1 z1) (= z2 x2) (= z3 (f x1)) (= (f x2) z4) (= x3 z5) (= z6 x4) (= z7 (f x3)) (= (f x4) z8))
                          (B (= z1 z2) (= z5 (f z3)) (= (f z4) z6) (= y1 z7) (= z8 y2) (not (= y1 y2)))";

    #[test]
    fn worked_values_on_example_graph() {
        let p = parse_problem(FREE_EDGE).unwrap();
        let out = interpolate(&p, Strategy::Greedy).unwrap();
        let id = |n: &str| p.terms.find(p.terms.symbols().lookup(n).unwrap(), &[]).unwrap();
        let mut ip = Interpolator::new(&out.graph, &out.colors);
        let k = |a, b| PathKey::new(id(a), id(b));
        assert_eq!(ip.b_premises(k("z7", "z8")), PathSet::from([k("z5", "z6")]));
        assert_eq!(ip.b_premises(k("z3", "z4")), PathSet::from([k("z1", "z2")]));
        assert_eq!(ip.a_premises(k("y1", "y2")), PathSet::from([k("z7", "z8")]));
        assert_eq!(
            ip.justification(k("z7", "z8")).unwrap().display(&out.terms).to_string(),
            "(=> (and (= z5 z6)) (= z7 z8))"
        );
        assert_eq!(ip.interpolant(k("z5", "z6")), ip.interpolant_recursive(k("z3", "z4")));
        let i = ip.interpolant(k("y1", "y2"));
        assert_eq!(i, ip.interpolant_recursive(k("y1", "y2")));
        assert_eq!(i, out.formula);
        assert_eq!(i.len(), 2);
    }

    #[test]
    fn satisfiable_instance_reports_partition() {
        let p = parse_problem("(A (= a b)) (B (not (= c d)))").unwrap();
        match interpolate(&p, Strategy::Greedy) {
            Err(Error::NotUnsatisfiable { partition }) => {
                assert!(partition.contains(&vec!["a".to_owned(), "b".to_owned()]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_disequalities() {
        let p = parse_problem("(A (not (= a a))) (B (= a b))").unwrap();
        let out = interpolate(&p, Strategy::Greedy).unwrap();
        assert_eq!(out.display(), "(and false)");
        let p = parse_problem("(A (= a b)) (B (not (= c c)))").unwrap();
        assert_eq!(interpolate(&p, Strategy::Greedy).unwrap().display(), "true");
    }

    #[test]
    fn pure_b_refutation_gives_true() {
        let p = parse_problem("(A (= x x2)) (B (= a b) (= b c) (not (= a c)))").unwrap();
        assert_eq!(interpolate(&p, Strategy::Greedy).unwrap().display(), "true");
    }

    #[test]
    fn no_b_colorable_vertex_gives_false() {
        let p = parse_problem("(A (= x y) (not (= x y2)) (= y y2)) (B (= b c))").unwrap();
        let out = interpolate(&p, Strategy::Greedy).unwrap();
        assert_eq!(out.display(), "(and false)");
    }
}
