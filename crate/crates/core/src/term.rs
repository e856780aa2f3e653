//! Hash-consed ground terms, literals and the A/B colorability classification.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

/// One of the two input sets. Also used as the color of a congruence-graph edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::B => "B",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(u32);

impl SymbolId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolInfo {
    pub name: String,
    pub arity: usize,
    pub in_a: bool,
    pub in_b: bool,
}

impl SymbolInfo {
    pub fn occurs_in(&self, side: Side) -> bool {
        match side {
            Side::A => self.in_a,
            Side::B => self.in_b,
        }
    }
}

/// Arity and A/B occurrence flags per symbol.
#[derive(Debug, Clone, Default)]
pub struct SymbolTable {
    infos: Vec<SymbolInfo>,
    by_name: HashMap<String, SymbolId>,
}

/// Returned by [`SymbolTable::declare`] when a symbol is reused with a new arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArityConflict {
    pub expected: usize,
}

impl SymbolTable {
    pub fn declare(&mut self, name: &str, arity: usize) -> Result<SymbolId, ArityConflict> {
        if let Some(&id) = self.by_name.get(name) {
            let expected = self.infos[id.index()].arity;
            return if expected == arity {
                Ok(id)
            } else {
                Err(ArityConflict { expected })
            };
        }
        let id = SymbolId(self.infos.len() as u32);
        self.infos.push(SymbolInfo {
            name: name.to_owned(),
            arity,
            in_a: false,
            in_b: false,
        });
        self.by_name.insert(name.to_owned(), id);
        Ok(id)
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.by_name.get(name).copied()
    }

    pub fn info(&self, id: SymbolId) -> &SymbolInfo {
        &self.infos[id.index()]
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.infos[id.index()].name
    }

    pub fn mark(&mut self, id: SymbolId, side: Side) {
        let info = &mut self.infos[id.index()];
        match side {
            Side::A => info.in_a = true,
            Side::B => info.in_b = true,
        }
    }

    pub fn len(&self) -> usize {
        self.infos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.infos.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SymbolId, &SymbolInfo)> {
        self.infos
            .iter()
            .enumerate()
            .map(|(i, info)| (SymbolId(i as u32), info))
    }
}

/// Dense handle of a hash-consed term. Arguments always have smaller ids than
/// the application that uses them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(u32);

impl TermId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TermData {
    pub head: SymbolId,
    pub args: Vec<TermId>,
}

/// Term store plus the symbol table the terms are built from.
#[derive(Debug, Clone, Default)]
pub struct TermTable {
    symbols: SymbolTable,
    nodes: Vec<TermData>,
    index: HashMap<TermData, TermId>,
}

impl TermTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn symbols_mut(&mut self) -> &mut SymbolTable {
        &mut self.symbols
    }

    /// Returns the handle of `head(args)`, creating it on first use.
    pub fn intern(&mut self, head: SymbolId, args: Vec<TermId>) -> TermId {
        debug_assert_eq!(self.symbols.info(head).arity, args.len());
        debug_assert!(args.iter().all(|a| a.index() < self.nodes.len()));
        let data = TermData { head, args };
        if let Some(&id) = self.index.get(&data) {
            return id;
        }
        let id = TermId(self.nodes.len() as u32);
        self.nodes.push(data.clone());
        self.index.insert(data, id);
        id
    }

    /// Interns a constant, declaring the symbol if needed.
    pub fn constant(&mut self, name: &str) -> Result<TermId, ArityConflict> {
        let sym = self.symbols.declare(name, 0)?;
        Ok(self.intern(sym, Vec::new()))
    }

    /// Interns `name(args)`, declaring the symbol if needed.
    pub fn app(&mut self, name: &str, args: Vec<TermId>) -> Result<TermId, ArityConflict> {
        let sym = self.symbols.declare(name, args.len())?;
        Ok(self.intern(sym, args))
    }

    pub fn find(&self, head: SymbolId, args: &[TermId]) -> Option<TermId> {
        self.index
            .get(&TermData {
                head,
                args: args.to_vec(),
            })
            .copied()
    }

    pub fn get(&self, t: TermId) -> &TermData {
        &self.nodes[t.index()]
    }

    pub fn head(&self, t: TermId) -> SymbolId {
        self.nodes[t.index()].head
    }

    pub fn args(&self, t: TermId) -> &[TermId] {
        &self.nodes[t.index()].args
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = TermId> {
        (0..self.nodes.len() as u32).map(TermId)
    }

    pub fn display(&self, t: TermId) -> DisplayTerm<'_> {
        DisplayTerm { table: self, term: t }
    }

    pub fn to_string(&self, t: TermId) -> String {
        self.display(t).to_string()
    }

    /// Symbols occurring anywhere in `t`.
    pub fn symbols_of(&self, t: TermId, out: &mut BTreeSet<SymbolId>) {
        let data = self.get(t);
        out.insert(data.head);
        for &a in &data.args {
            self.symbols_of(a, out);
        }
    }

    /// Colorability computed directly from the symbol flags, without memo.
    pub fn colorability(&self, t: TermId) -> Colorability {
        let data = self.get(t);
        let info = self.symbols.info(data.head);
        data.args.iter().fold(
            Colorability::from_flags(info.in_a, info.in_b),
            |acc, &a| acc.meet(self.colorability(a)),
        )
    }
}

pub struct DisplayTerm<'a> {
    table: &'a TermTable,
    term: TermId,
}

impl fmt::Display for DisplayTerm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let data = self.table.get(self.term);
        let name = self.table.symbols.name(data.head);
        if data.args.is_empty() {
            return f.write_str(name);
        }
        write!(f, "({name}")?;
        for &a in &data.args {
            write!(f, " {}", self.table.display(a))?;
        }
        f.write_str(")")
    }
}

/// Smallest superset of `roots` closed under taking arguments, in id order.
pub fn subterm_closure(table: &TermTable, roots: impl IntoIterator<Item = TermId>) -> Vec<TermId> {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<TermId> = roots.into_iter().collect();
    while let Some(t) = stack.pop() {
        if seen.insert(t) {
            stack.extend(table.args(t).iter().copied());
        }
    }
    seen.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Polarity {
    Equal,
    Disequal,
}

/// An equality or disequality, stored with `lhs <= rhs` so that `s = t` and
/// `t = s` are the same value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    lhs: TermId,
    rhs: TermId,
    polarity: Polarity,
}

impl Literal {
    pub fn new(s: TermId, t: TermId, polarity: Polarity) -> Self {
        let (lhs, rhs) = if s <= t { (s, t) } else { (t, s) };
        Literal { lhs, rhs, polarity }
    }

    pub fn eq(s: TermId, t: TermId) -> Self {
        Self::new(s, t, Polarity::Equal)
    }

    pub fn neq(s: TermId, t: TermId) -> Self {
        Self::new(s, t, Polarity::Disequal)
    }

    pub fn lhs(&self) -> TermId {
        self.lhs
    }

    pub fn rhs(&self) -> TermId {
        self.rhs
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn is_equality(&self) -> bool {
        self.polarity == Polarity::Equal
    }

    pub fn negate(&self) -> Self {
        let polarity = match self.polarity {
            Polarity::Equal => Polarity::Disequal,
            Polarity::Disequal => Polarity::Equal,
        };
        Literal { polarity, ..*self }
    }

    pub fn display<'a>(&self, table: &'a TermTable) -> DisplayLiteral<'a> {
        DisplayLiteral {
            table,
            literal: *self,
        }
    }
}

pub struct DisplayLiteral<'a> {
    table: &'a TermTable,
    literal: Literal,
}

impl fmt::Display for DisplayLiteral<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.literal;
        let eq = format!(
            "(= {} {})",
            self.table.display(l.lhs),
            self.table.display(l.rhs)
        );
        match l.polarity {
            Polarity::Equal => f.write_str(&eq),
            Polarity::Disequal => write!(f, "(not {eq})"),
        }
    }
}

/// Which of the two signatures a term (or edge, or literal) lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Colorability {
    None,
    AOnly,
    BOnly,
    AB,
}

impl Colorability {
    pub fn from_flags(a: bool, b: bool) -> Self {
        match (a, b) {
            (true, true) => Colorability::AB,
            (true, false) => Colorability::AOnly,
            (false, true) => Colorability::BOnly,
            (false, false) => Colorability::None,
        }
    }

    pub fn is_a(self) -> bool {
        matches!(self, Colorability::AOnly | Colorability::AB)
    }

    pub fn is_b(self) -> bool {
        matches!(self, Colorability::BOnly | Colorability::AB)
    }

    pub fn is(self, side: Side) -> bool {
        match side {
            Side::A => self.is_a(),
            Side::B => self.is_b(),
        }
    }

    pub fn is_ab(self) -> bool {
        self == Colorability::AB
    }

    pub fn is_colorable(self) -> bool {
        self != Colorability::None
    }

    pub fn meet(self, other: Self) -> Self {
        Self::from_flags(self.is_a() && other.is_a(), self.is_b() && other.is_b())
    }
}

/// Memoized colorability per term handle. Because arguments precede their
/// applications, the table is filled in id order in one pass.
#[derive(Debug, Clone, Default)]
pub struct ColorTable {
    cache: Vec<Colorability>,
}

impl ColorTable {
    pub fn new(table: &TermTable) -> Self {
        let mut colors = ColorTable::default();
        colors.extend(table);
        colors
    }

    /// Classifies terms interned since the last call.
    pub fn extend(&mut self, table: &TermTable) {
        for i in self.cache.len()..table.len() {
            let data = &table.nodes[i];
            let info = table.symbols.info(data.head);
            let c = data.args.iter().fold(
                Colorability::from_flags(info.in_a, info.in_b),
                |acc, a| acc.meet(self.cache[a.index()]),
            );
            self.cache.push(c);
        }
    }

    pub fn term(&self, t: TermId) -> Colorability {
        self.cache[t.index()]
    }

    /// Colorability of the equality `s = t`, i.e. of the edge `<s, t>`.
    pub fn edge(&self, s: TermId, t: TermId) -> Colorability {
        self.term(s).meet(self.term(t))
    }

    pub fn literal(&self, l: &Literal) -> Colorability {
        self.edge(l.lhs(), l.rhs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_3_3() -> (TermTable, [TermId; 7]) {
        let mut t = TermTable::new();
        let x = t.constant("x").unwrap();
        let y = t.constant("y").unwrap();
        let z1 = t.constant("z1").unwrap();
        let z2 = t.constant("z2").unwrap();
        let z3 = t.constant("z3").unwrap();
        let xz2 = t.app("*", vec![x, z2]).unwrap();
        let z1y = t.app("*", vec![z1, y]).unwrap();
        for name in ["x", "z1", "z2", "z3", "*"] {
            let s = t.symbols().lookup(name).unwrap();
            t.symbols_mut().mark(s, Side::A);
        }
        for name in ["y", "z1", "z2", "z3", "*"] {
            let s = t.symbols().lookup(name).unwrap();
            t.symbols_mut().mark(s, Side::B);
        }
        (t, [x, y, z1, z2, z3, xz2, z1y])
    }

    #[test]
    fn colorability_of_example_terms() {
        let (mut t, [x, y, z1, z2, _, xz2, z1y]) = example_3_3();
        let z1z2 = t.app("*", vec![z1, z2]).unwrap();
        let xy = t.app("*", vec![x, y]).unwrap();
        let colors = ColorTable::new(&t);
        assert_eq!(colors.term(xz2), Colorability::AOnly);
        assert_eq!(colors.term(z1z2), Colorability::AB);
        assert_eq!(colors.term(xy), Colorability::None);
        assert_eq!(colors.edge(xz2, z1y), Colorability::None);
        assert_eq!(colors.edge(z1z2, z1z2), Colorability::AB);
        assert_eq!(colors.edge(xz2, xz2), Colorability::AOnly);
        for id in t.ids() {
            assert_eq!(colors.term(id), t.colorability(id));
        }
    }

    #[test]
    fn meet_table() {
        use Colorability::*;
        let all = [None, AOnly, BOnly, AB];
        for a in all {
            assert_eq!(a.meet(AB), a);
            assert_eq!(a.meet(None), None);
            assert_eq!(a.meet(a), a);
            for b in all {
                assert_eq!(a.meet(b), b.meet(a));
            }
        }
        assert_eq!(AOnly.meet(BOnly), None);
    }

    #[test]
    fn hash_consing_and_topological_ids() {
        let mut t = TermTable::new();
        let a = t.constant("a").unwrap();
        let fa = t.app("f", vec![a]).unwrap();
        assert_eq!(t.app("f", vec![a]).unwrap(), fa);
        assert!(a < fa);
        assert_eq!(t.app("f", vec![a, a]), Err(ArityConflict { expected: 1 }));
        assert_eq!(t.to_string(fa), "(f a)");
    }

    #[test]
    fn literal_symmetry() {
        let mut t = TermTable::new();
        let a = t.constant("a").unwrap();
        let b = t.constant("b").unwrap();
        assert_eq!(Literal::eq(a, b), Literal::eq(b, a));
        assert_ne!(Literal::eq(a, b), Literal::neq(a, b));
        assert_eq!(Literal::eq(b, a).lhs(), a);
        assert_eq!(Literal::neq(a, b).display(&t).to_string(), "(not (= a b))");
    }

    #[test]
    fn closure_of_subterms() {
        let mut t = TermTable::new();
        let a = t.constant("a").unwrap();
        let fa = t.app("f", vec![a]).unwrap();
        let b = t.constant("b").unwrap();
        let gfab = t.app("g", vec![fa, b]).unwrap();
        assert_eq!(subterm_closure(&t, [fa]), vec![a, fa]);
        assert_eq!(subterm_closure(&t, [gfab]), vec![a, fa, b, gfab]);
        assert!(subterm_closure(&t, []).is_empty());
    }
}
