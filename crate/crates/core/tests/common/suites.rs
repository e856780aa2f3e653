//! Seeded randomized suites shared by the property tests and the acceptance
//! report. Each returns counts and the first few failure descriptions.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{oracle_accepts, Oracle};
use eufi::coloring::factorize;
use eufi::congruence::{close, Equation, Origin};
use eufi::game::{euf_bridge, game_to_horn, play};
use eufi::gen::{generate, Family};
use eufi::horn::Conclusion;
use eufi::interpolate::{Interpolator, PathKey};
use eufi::term::subterm_closure;
use eufi::verify::{brute_force_closure, euf_entails};
use eufi::{check_interpolant, interpolate, parse_problem, Literal, Outcome, Side, Strategy, TermId, TermTable};

pub const SIZES: std::ops::RangeInclusive<usize> = 5..=60;

#[derive(Debug, Default)]
pub struct Tally {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Tally {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, msg: String) {
        if self.failures.len() < 5 {
            self.failures.push(msg);
        } else if self.failures.len() == 5 {
            self.failures.push("...".into());
        }
    }

    fn check(&mut self, cond: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !cond {
            self.fail(msg());
        }
    }

    pub fn summary(&self) -> String {
        if self.ok() {
            format!("{} checked", self.checked)
        } else {
            format!("{} checked, failures: {}", self.checked, self.failures.join("; "))
        }
    }
}

/// Results of running one generator family through the pipeline.
#[derive(Debug, Default)]
pub struct FamilyReport {
    pub instances: usize,
    /// Interpolants accepted by the library verifier.
    pub verified: Tally,
    /// Every clause has one conclusion and only shared atoms.
    pub horn_shape: Tally,
    /// Closed-form and recursive path interpolants agree on visited paths.
    pub closed_form: Tally,
    /// `sigma` in A-premises of `pi` implies A-premises of `sigma` are too.
    pub monotone: Tally,
    /// Game interpolants from the bridge refutation are interpolants.
    pub bridge: Tally,
    /// The test oracle agrees with the library verifier on a sample.
    pub oracle: Tally,
    /// Time spent interpolating and verifying, excluding the extra checks.
    pub pipeline: Duration,
    pub elapsed: Duration,
}

pub fn instance(family: Family, i: usize) -> String {
    let span = SIZES.end() - SIZES.start() + 1;
    generate(family, SIZES.start() + (i * 7) % span, 1000 * family as u64 + i as u64)
}

pub fn family_suite(family: Family, count: usize, with_bridge: bool) -> FamilyReport {
    let start = Instant::now();
    let mut r = FamilyReport::default();
    for i in 0..count {
        let text = instance(family, i);
        let p = parse_problem(&text).unwrap();
        let timer = Instant::now();
        let out = match interpolate(&p, Strategy::Greedy) {
            Ok(out) => out,
            Err(e) => {
                r.verified.check(false, || format!("{} #{i}: {e}", family.name()));
                continue;
            }
        };
        r.instances += 1;
        let report = check_interpolant(&p, &out.terms, &out.formula);
        r.pipeline += timer.elapsed();
        r.verified.check(report.accepted(), || format!("{} #{i}: {report:?}\n{text}", family.name()));
        for c in out.formula.clauses() {
            let ab = c.terms().all(|t| out.terms.colorability(t).is_ab());
            let single = matches!(c.conclusion(), Conclusion::False | Conclusion::Literal(_));
            r.horn_shape.check(ab && single, || format!("{} #{i}: clause with local atoms", family.name()));
        }
        identities(&out, &mut r, family, i);
        if i % 10 == 0 {
            let agree = oracle_accepts(&p, &out.terms, &out.formula) == report.accepted();
            r.oracle.check(agree, || format!("{} #{i}: oracle disagrees", family.name()));
        }
        if with_bridge {
            let ok = euf_bridge(&p, Strategy::Greedy).and_then(|b| {
                let game = play(&b.proof)?;
                let mut terms = b.outcome.terms.clone();
                let h = game_to_horn(&game.interpolant, &mut terms)?;
                Ok(check_interpolant(&p, &terms, &h).accepted())
            });
            r.bridge.check(matches!(ok, Ok(true)), || format!("{} #{i}: {ok:?}", family.name()));
        }
    }
    r.elapsed = start.elapsed();
    r
}

fn identities(out: &Outcome, r: &mut FamilyReport, family: Family, i: usize) {
    let mut ip = Interpolator::new(&out.graph, &out.colors);
    let lit = out.refuted.literal;
    if lit.lhs() == lit.rhs() {
        return;
    }
    ip.interpolant(PathKey::new(lit.lhs(), lit.rhs()));
    for key in ip.visited() {
        let b_ends = out.colors.term(key.from).is_b() && out.colors.term(key.to).is_b();
        if b_ends {
            let closed = ip.interpolant(key);
            let rec = ip.interpolant_recursive(key);
            r.closed_form.check(closed == rec, || format!("{} #{i}: {key:?}", family.name()));
        }
        let a = ip.a_premises(key);
        for s in &a {
            let sub = ip.a_premises(*s);
            r.monotone.check(sub.is_subset(&a), || format!("{} #{i}: {key:?}", family.name()));
        }
    }
}

/// Both entailments for `count` paths drawn from the queried paths of
/// generated instances, decided by the library and by the test oracle.
pub fn premise_entailment_suite(count: usize) -> Tally {
    let mut t = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mut i = 0;
    while t.checked < count {
        let family = Family::ALL[i % 4];
        let p = parse_problem(&instance(family, 500 + i)).unwrap();
        i += 1;
        let Ok(out) = interpolate(&p, Strategy::Greedy) else { continue };
        let lit = out.refuted.literal;
        if lit.lhs() == lit.rhs() {
            continue;
        }
        let mut ip = Interpolator::new(&out.graph, &out.colors);
        ip.interpolant(PathKey::new(lit.lhs(), lit.rhs()));
        let keys: Vec<PathKey> = ip.visited().into_iter().filter(|k| !k.is_empty()).collect();
        let Some(&key) = keys.choose(&mut rng) else { continue };
        let goal = key.equality();
        for side in [Side::A, Side::B] {
            let mut lits = p.side(side).to_vec();
            lits.extend(ip.premises(side.other(), key).iter().map(PathKey::equality));
            let lib = euf_entails(&out.terms, &lits, goal);
            let oracle = oracle_entails(&out.terms, &lits, goal);
            if !(lib && oracle) {
                t.fail(format!("{} #{}: {side} side, {key:?}", family.name(), 500 + i - 1));
            }
        }
        t.checked += 1;
    }
    t
}

fn oracle_entails(terms: &TermTable, lits: &[Literal], goal: Literal) -> bool {
    let eqs: Vec<(TermId, TermId)> = lits.iter().filter(|l| l.is_equality()).map(|l| (l.lhs(), l.rhs())).collect();
    let mut roots: Vec<TermId> = lits.iter().flat_map(|l| [l.lhs(), l.rhs()]).collect();
    roots.extend([goal.lhs(), goal.rhs()]);
    let o = Oracle::new(terms, &eqs, &roots);
    lits.iter().any(|l| !l.is_equality() && o.equal(l.lhs(), l.rhs())) || o.equal(goal.lhs(), goal.rhs())
}

/// On pure transitivity chains with the disequality in B, one unit clause
/// per maximal A-factor of the refutation path.
pub fn factor_count_suite(count: usize) -> Tally {
    let mut t = Tally::default();
    for i in 0..count {
        let p = parse_problem(&instance(Family::Chain, i)).unwrap();
        let out = interpolate(&p, Strategy::Greedy).unwrap();
        let lit = out.refuted.literal;
        let path = out.graph.graph.path(lit.lhs(), lit.rhs()).unwrap();
        let a_factors = factorize(&out.graph, &path).unwrap().iter().filter(|f| f.color == Side::A).count();
        t.check(out.formula.len() == a_factors, || {
            format!("chain #{i}: {} clauses, {a_factors} A-factors", out.formula.len())
        });
    }
    t
}

/// A random equation set over terms from `a b c d`, unary `f` and binary
/// `g`, with a universe of at most `max_terms` terms.
pub fn random_closure_case(rng: &mut impl Rng, max_terms: usize) -> (TermTable, Vec<(TermId, TermId)>, Vec<TermId>) {
    fn term(rng: &mut impl Rng, t: &mut TermTable, depth: usize) -> TermId {
        if depth == 0 || rng.gen_bool(0.45) {
            let c = ["a", "b", "c", "d"][rng.gen_range(0..4)];
            return t.constant(c).unwrap();
        }
        if rng.gen_bool(0.6) {
            let x = term(rng, t, depth - 1);
            t.app("f", vec![x]).unwrap()
        } else {
            let x = term(rng, t, depth - 1);
            let y = term(rng, t, depth - 1);
            t.app("g", vec![x, y]).unwrap()
        }
    }
    loop {
        let mut terms = TermTable::new();
        let roots: Vec<TermId> = (0..rng.gen_range(2..8)).map(|_| term(rng, &mut terms, 3)).collect();
        let universe = subterm_closure(&terms, roots);
        if universe.len() > max_terms || universe.len() < 2 {
            continue;
        }
        let eqs = (0..rng.gen_range(1..6))
            .map(|_| (*universe.choose(rng).unwrap(), *universe.choose(rng).unwrap()))
            .collect();
        return (terms, eqs, universe);
    }
}

/// Compares congruence-graph connectivity with the brute-force classes and
/// with the test oracle on every pair of the universe.
pub fn closure_agrees(terms: &TermTable, eqs: &[(TermId, TermId)], universe: &[TermId]) -> Result<(), String> {
    let equations: Vec<Equation> = eqs
        .iter()
        .enumerate()
        .map(|(index, &(lhs, rhs))| Equation { lhs, rhs, origin: Origin { side: Side::A, index } })
        .collect();
    let g = close(terms, &equations, universe).map_err(|e| e.to_string())?;
    let classes = brute_force_closure(terms, eqs, universe).map_err(|e| e.to_string())?;
    let oracle = Oracle::new(terms, eqs, universe);
    let class_of = |t: TermId| classes.iter().position(|c| c.contains(&t)).unwrap();
    for &s in universe {
        for &t in universe {
            let graph = g.connected(s, t);
            if graph != (class_of(s) == class_of(t)) || graph != oracle.equal(s, t) {
                return Err(format!("{} ~ {}: graph says {graph}", terms.to_string(s), terms.to_string(t)));
            }
        }
    }
    Ok(())
}

pub fn closure_suite(count: usize) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut t = Tally::default();
    for i in 0..count {
        let (terms, eqs, universe) = random_closure_case(&mut rng, 12);
        let res = closure_agrees(&terms, &eqs, &universe);
        t.check(res.is_ok(), || format!("case {i}: {}", res.unwrap_err()));
    }
    t
}
