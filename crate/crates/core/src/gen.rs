//! Seeded generators of jointly unsatisfiable problems, emitted as problem
//! text. Each family takes a target literal count.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::congruence::{close, problem_equations};
use crate::problem::parse_problem;
use crate::term::Side;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Alternating A and B segments of an equality chain.
    Chain,
    /// The ladder of products whose interpolant needs one clause per column.
    Ladder,
    /// Congruences whose arguments are only equal across the partition.
    Split,
    /// Random equalities over local and shared symbols.
    Soup,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Chain, Family::Ladder, Family::Split, Family::Soup];

    pub fn name(self) -> &'static str {
        match self {
            Family::Chain => "chain",
            Family::Ladder => "ladder",
            Family::Split => "split",
            Family::Soup => "soup",
        }
    }
}

pub fn generate(family: Family, size: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match family {
        Family::Chain => chain(size, &mut rng),
        Family::Ladder => ladder(size.saturating_sub(2).max(2) / 2),
        Family::Split => split((size / 5).max(1), &mut rng),
        Family::Soup => soup(size, &mut rng),
    }
}

#[derive(Default)]
struct Sets {
    a: Vec<String>,
    b: Vec<String>,
}

impl Sets {
    fn push(&mut self, side: Side, lit: String) {
        match side {
            Side::A => self.a.push(lit),
            Side::B => self.b.push(lit),
        }
    }

    fn shuffle(&mut self, rng: &mut impl Rng) {
        self.a.shuffle(rng);
        self.b.shuffle(rng);
    }

    fn text(&self) -> String {
        let block = |name: &str, lits: &[String]| {
            let mut s = format!("({name}");
            for l in lits {
                s.push_str("\n  ");
                s.push_str(l);
            }
            s.push_str(")\n");
            s
        };
        block("A", &self.a) + &block("B", &self.b)
    }
}

fn eq(s: &str, t: &str) -> String {
    format!("(= {s} {t})")
}

fn neq(s: &str, t: &str) -> String {
    format!("(not (= {s} {t}))")
}

fn side_of(a: bool) -> Side {
    if a {
        Side::A
    } else {
        Side::B
    }
}

/// A chain of `n - 1` equalities from `z0` to its far end, cut into segments
/// of random length and alternating color. Junctions are shared constants,
/// segment interiors are local. The B set refutes the chain.
pub fn chain(n: usize, rng: &mut impl Rng) -> String {
    let edges = n.max(2) - 1;
    let mut sets = Sets::default();
    let mut side = side_of(rng.gen_bool(0.5));
    let mut prev = "z0".to_owned();
    let (mut done, mut junction, mut local) = (0, 0, 0);
    while done < edges {
        let len = rng.gen_range(1..=3).min(edges - done);
        for k in 0..len {
            let next = if k + 1 == len {
                junction += 1;
                format!("z{junction}")
            } else {
                local += 1;
                let prefix = if side == Side::A { 'x' } else { 'y' };
                format!("{prefix}{local}")
            };
            sets.push(side, eq(&prev, &next));
            prev = next;
        }
        done += len;
        side = side.other();
    }
    sets.push(Side::B, neq("z0", &prev));
    sets.shuffle(rng);
    sets.text()
}

/// The product ladder over `u0..un`, `v0..vn`: column 1 is `u0 = v0`,
/// column `i + 1` holds `x_i * u_{i-1} = u_i` and `x_i * v_{i-1} = v_i`, and
/// column `n + 2` is `u_n != v_n`. Odd columns go to A.
pub fn ladder(n: usize) -> String {
    let mut sets = Sets::default();
    let col_side = |c: usize| side_of(c % 2 == 1);
    sets.push(col_side(1), eq("u0", "v0"));
    for i in 1..=n {
        let side = col_side(i + 1);
        sets.push(side, eq(&format!("(* x{i} u{})", i - 1), &format!("u{i}")));
        sets.push(side, eq(&format!("(* x{i} v{})", i - 1), &format!("v{i}")));
    }
    sets.push(col_side(n + 2), neq(&format!("u{n}"), &format!("v{n}")));
    sets.text()
}

/// `k` gadgets: `g(x, z2) = z3` with `x = z1` on one side and
/// `g(z1, y) = z4` with `y = z2` on the other, so `z3 = z4` needs a term
/// built from both. Gadgets are linked into one chain.
pub fn split(k: usize, rng: &mut impl Rng) -> String {
    let mut sets = Sets::default();
    for i in 0..k {
        let first = side_of(rng.gen_bool(0.5));
        let second = first.other();
        let g = if rng.gen_bool(0.5) { "g" } else { "h" };
        let (x, y) = match first {
            Side::A => (format!("x{i}"), format!("y{i}")),
            Side::B => (format!("y{i}"), format!("x{i}")),
        };
        let (z1, z2, z3, z4) = (format!("p{i}"), format!("q{i}"), format!("r{i}"), format!("s{i}"));
        sets.push(first, eq(&x, &z1));
        sets.push(first, eq(&format!("({g} {x} {z2})"), &z3));
        sets.push(second, eq(&y, &z2));
        sets.push(second, eq(&format!("({g} {z1} {y})"), &z4));
        if i > 0 {
            sets.push(side_of(rng.gen_bool(0.5)), eq(&format!("s{}", i - 1), &z3));
        }
    }
    let last = format!("s{}", k - 1);
    sets.push(side_of(rng.gen_bool(0.5)), neq("r0", &last));
    sets.shuffle(rng);
    sets.text()
}

fn random_term(rng: &mut impl Rng, side: Side, depth: usize) -> String {
    let local = if side == Side::A { ["a0", "a1", "a2"] } else { ["b0", "b1", "b2"] };
    let shared = ["c0", "c1", "c2"];
    if depth == 0 || rng.gen_bool(0.4) {
        return if rng.gen_bool(0.5) {
            local.choose(rng).unwrap().to_string()
        } else {
            shared.choose(rng).unwrap().to_string()
        };
    }
    let local_f = if side == Side::A { "ha" } else { "hb" };
    match rng.gen_range(0..3) {
        0 => format!("(f {})", random_term(rng, side, depth - 1)),
        1 => format!("({local_f} {})", random_term(rng, side, depth - 1)),
        _ => format!(
            "(g {} {})",
            random_term(rng, side, depth - 1),
            random_term(rng, side, depth - 1)
        ),
    }
}

/// `n - 1` random equalities split between the sides, plus one disequality
/// between distinct terms the equalities make equal. The disequality goes to
/// B when both terms are B-colorable and to A otherwise.
pub fn soup(n: usize, rng: &mut impl Rng) -> String {
    let eqs = n.max(2) - 1;
    loop {
        let mut sets = Sets::default();
        for _ in 0..eqs {
            let side = side_of(rng.gen_bool(0.5));
            let (s, t) = (random_term(rng, side, 2), random_term(rng, side, 2));
            if s != t {
                sets.push(side, eq(&s, &t));
            }
        }
        let Ok(p) = parse_problem(&sets.text()) else { continue };
        let vertices = p.term_set();
        let Ok(g) = close(&p.terms, &problem_equations(&p), &vertices) else { continue };
        let mut pairs = Vec::new();
        for (i, &s) in vertices.iter().enumerate() {
            for &t in &vertices[i + 1..] {
                if !g.connected(s, t) {
                    continue;
                }
                let c = p.terms.colorability(s).meet(p.terms.colorability(t));
                if c.is_b() {
                    pairs.push((Side::B, s, t));
                } else if c.is_a() {
                    pairs.push((Side::A, s, t));
                }
            }
        }
        let Some(&(side, s, t)) = pairs.choose(rng) else { continue };
        sets.push(side, neq(&p.terms.to_string(s), &p.terms.to_string(t)));
        sets.shuffle(rng);
        return sets.text();
    }
}
