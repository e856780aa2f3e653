mod common;

use common::suites::{closure_agrees, closure_suite, factor_count_suite, family_suite, premise_entailment_suite, random_closure_case};
use eufi::game::{euf_bridge, play, check_cut};
use eufi::gen::{generate, Family};
use eufi::{parse_horn, parse_problem, Strategy};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn assert_family(family: Family) {
    let r = family_suite(family, 500, true);
    assert_eq!(r.instances, 500);
    for (what, t) in [
        ("verified", &r.verified),
        ("horn shape", &r.horn_shape),
        ("closed form vs recursion", &r.closed_form),
        ("monotone premises", &r.monotone),
        ("bridge", &r.bridge),
        ("oracle", &r.oracle),
    ] {
        assert!(t.ok(), "{} {what}: {}", family.name(), t.summary());
    }
}

#[test]
fn chain_family() {
    assert_family(Family::Chain);
}

#[test]
fn ladder_family() {
    assert_family(Family::Ladder);
}

#[test]
fn split_family() {
    assert_family(Family::Split);
}

#[test]
fn soup_family() {
    assert_family(Family::Soup);
}

#[test]
fn closure_matches_brute_force() {
    let t = closure_suite(500);
    assert!(t.ok(), "{}", t.summary());
}

#[test]
fn premises_entail_paths() {
    let t = premise_entailment_suite(100);
    assert!(t.ok(), "{}", t.summary());
}

#[test]
fn one_clause_per_a_factor_on_chains() {
    let t = factor_count_suite(500);
    assert!(t.ok(), "{}", t.summary());
}

fn runner(cases: u32, seed: u64) -> TestRunner {
    TestRunner::new(Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    })
}

#[test]
fn closure_on_arbitrary_seeds() {
    runner(200, 7)
        .run(&any::<u64>(), |seed| {
            let (terms, eqs, universe) = random_closure_case(&mut ChaCha8Rng::seed_from_u64(seed), 12);
            closure_agrees(&terms, &eqs, &universe).map_err(TestCaseError::fail)
        })
        .unwrap();
}

#[test]
fn bridge_cuts_satisfy_the_cut_conditions() {
    let families = prop::sample::select(Family::ALL.to_vec());
    runner(200, 11)
        .run(&(families, 5usize..=40, any::<u64>()), |(family, size, seed)| {
            let p = parse_problem(&generate(family, size, seed)).unwrap();
            let b = euf_bridge(&p, Strategy::Greedy).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert!(b.proof.check_local());
            let game = play(&b.proof).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(check_cut(&game.proof, &game.cut), Ok(()));
            prop_assert!(game.run.rounds() <= game.cut.t_a.len() + game.cut.t_b.len());
            Ok(())
        })
        .unwrap();
}

#[test]
fn partial_interpolants_of_bridge_runs() {
    // For each beta in S_B: A entails every implication, and B with them entails beta.
    use eufi::verify::{euf_entails, unsat_with_horn};
    use eufi::game::game_to_horn;
    runner(100, 13)
        .run(&(prop::sample::select(Family::ALL.to_vec()), 5usize..=30, any::<u64>()), |(family, size, seed)| {
            let p = parse_problem(&generate(family, size, seed)).unwrap();
            let b = euf_bridge(&p, Strategy::Greedy).unwrap();
            let game = play(&b.proof).unwrap();
            let mut terms = b.outcome.terms.clone();
            for &beta in &game.run.s_b {
                let part = game_to_horn(&game.run.partial_interpolant(&game.proof, beta), &mut terms).unwrap();
                for c in part.clauses() {
                    let mut lits = p.a.clone();
                    lits.extend(c.premises().iter().copied());
                    let entailed = match c.conclusion() {
                        eufi::Conclusion::False => eufi::verify::euf_unsat(&terms, &lits),
                        eufi::Conclusion::Literal(l) => euf_entails(&terms, &lits, l),
                    };
                    prop_assert!(entailed);
                }
                let label = game.proof.label(beta).to_string();
                let mut lits = p.b.clone();
                if label == "false" || label == "false'" {
                    prop_assert!(unsat_with_horn(&terms, &lits, &part));
                } else {
                    // A reflexive label normalizes to no clause and holds trivially.
                    let goal = parse_horn(&label, &mut terms).unwrap();
                    let clause = goal.clauses().next().cloned();
                    if let Some(clause) = clause {
                        let eufi::Conclusion::Literal(l) = clause.conclusion() else { unreachable!() };
                        lits.push(l.negate());
                        prop_assert!(unsat_with_horn(&terms, &lits, &part));
                    }
                }
            }
            Ok(())
        })
        .unwrap();
}
