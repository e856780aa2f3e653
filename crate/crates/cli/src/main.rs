//! `eufi`: interpolants for ground EUF problems from the command line.
//!
//! Exit status: 0 on success, 1 when A and B are satisfiable or a
//! verification fails, 2 on usage, input or parse errors.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use eufi::congruence::{close, problem_equations};
use eufi::game::{euf_bridge, play, GameResult, ProofTree};
use eufi::gen::{chain, ladder, soup, split};
use eufi::{check_interpolant, interpolate, parse_horn, parse_problem, Error, ProblemInstance, Side, Strategy};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "eufi", version, about = "Craig interpolants for ground EUF literal sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an interpolant of the A and B sets in FILE.
    Interpolate(InterpolateArgs),
    /// Check that a Horn formula is an interpolant of a problem.
    Verify {
        problem: PathBuf,
        /// File holding the formula, e.g. `(and (=> (and (= a b)) (= c d)))`.
        interpolant: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the congruence classes of all problem terms.
    Closure {
        file: PathBuf,
        /// Print the congruence graph in DOT instead.
        #[arg(long)]
        dot: bool,
    },
    /// Interpolation game on a local refutation.
    Game {
        #[command(subcommand)]
        action: GameAction,
    },
    /// Print a generated problem.
    Gen(GenArgs),
}

#[derive(Args)]
struct InterpolateArgs {
    /// Problem file, or `-` for standard input.
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = StrategyArg::Greedy)]
    strategy: StrategyArg,
    /// Check the result and fail if it is not an interpolant.
    #[arg(long)]
    verify: bool,
    /// Print sizes of the graph and the result to standard error.
    #[arg(long)]
    stats: bool,
    #[arg(long)]
    json: bool,
    /// Write the colored congruence graph in DOT to this file.
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Greedy,
    AllA,
    AllB,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Greedy => Strategy::Greedy,
            StrategyArg::AllA => Strategy::AllA,
            StrategyArg::AllB => Strategy::AllB,
        }
    }
}

#[derive(Subcommand)]
enum GameAction {
    /// Print the coloring cut.
    Cut(GameArgs),
    /// Print the interpolant of the run and its number of rounds.
    Interpolate(GameArgs),
}

#[derive(Args)]
struct GameArgs {
    /// Proof file, or a problem file with `--problem`.
    file: PathBuf,
    /// Read FILE as a problem and play on the refutation read off its graph.
    #[arg(long)]
    problem: bool,
    #[arg(long, value_enum, default_value_t = StrategyArg::Greedy)]
    strategy: StrategyArg,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Family {
    /// Alternating chain with N literals.
    #[arg(long, value_name = "N")]
    chain: Option<usize>,
    /// Product ladder with N columns of products.
    #[arg(long, value_name = "N")]
    ladder: Option<usize>,
    /// N gadgets whose congruences need a repair.
    #[arg(long, value_name = "N")]
    split: Option<usize>,
    /// Random equalities, N literals.
    #[arg(long, value_name = "N")]
    soup: Option<usize>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    family: Family,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn input(msg: impl ToString) -> Self {
        Failure { code: 2, msg: msg.to_string() }
    }

    fn rejected(msg: impl ToString) -> Self {
        Failure { code: 1, msg: msg.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotUnsatisfiable { ref partition } => {
                let classes: Vec<String> = partition.iter().map(|c| format!("{{{}}}", c.join(", "))).collect();
                Failure::rejected(format!("{e}; classes: {}", classes.join(" ")))
            }
            e => Failure::input(e),
        }
    }
}

type CliResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(Failure::input)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_problem(path: &Path) -> Result<ProblemInstance, Failure> {
    Ok(parse_problem(&read(path)?)?)
}

fn run_interpolate(a: InterpolateArgs) -> CliResult {
    let p = load_problem(&a.file)?;
    let out = interpolate(&p, a.strategy.into())?;
    if let Some(path) = &a.dot {
        fs::write(path, out.graph.to_dot(&out.terms)).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    }
    let report = (a.verify || a.json).then(|| check_interpolant(&p, &out.terms, &out.formula));
    let new: Vec<String> = out.new_vertices.iter().map(|&t| out.terms.to_string(t)).collect();
    if a.json {
        let value = json!({
            "interpolant": out.display(),
            "clause_count": out.formula.len(),
            "verified": report.as_ref().map(|r| r.accepted()),
            "repair_vertices": new,
            "factors": out.factors,
        });
        println!("{value}");
    } else {
        println!("{}", out.display());
    }
    if a.stats {
        eprintln!("vertices: {}", out.graph.graph.vertex_count());
        eprintln!("edges: {}", out.graph.graph.edges().len());
        eprintln!("repair vertices: {}", new.len());
        eprintln!("factors: {}", out.factors);
        eprintln!("clauses: {}", out.formula.len());
        eprintln!("atoms: {}", out.formula.atom_count());
    }
    match report {
        Some(r) if a.verify && !r.accepted() => Err(Failure::rejected(format!("not an interpolant: {}", r.failures.join("; ")))),
        Some(_) if a.verify && !a.json => {
            eprintln!("verified");
            Ok(())
        }
        _ => Ok(()),
    }
}

fn run_verify(problem: &Path, interpolant: &Path, as_json: bool) -> CliResult {
    let p = load_problem(problem)?;
    let mut terms = p.terms.clone();
    let h = parse_horn(&read(interpolant)?, &mut terms)?;
    let r = check_interpolant(&p, &terms, &h);
    if as_json {
        println!("{}", serde_json::to_string(&r).expect("report serializes"));
    } else {
        println!("shared signature: {}", r.shared_signature_ok);
        println!("A entails I: {}", r.a_entails_i);
        println!("B and I unsatisfiable: {}", r.b_i_unsat);
        for f in &r.failures {
            println!("  {f}");
        }
    }
    if r.accepted() {
        Ok(())
    } else {
        Err(Failure::rejected("not an interpolant"))
    }
}

fn run_closure(file: &Path, dot: bool) -> CliResult {
    let p = load_problem(file)?;
    let g = close(&p.terms, &problem_equations(&p), &p.term_set())?;
    if dot {
        print!("{}", g.to_dot(&p.terms, None));
        return Ok(());
    }
    for class in g.components() {
        let names: Vec<String> = class.iter().map(|&t| p.terms.to_string(t)).collect();
        println!("{{{}}}", names.join(", "));
    }
    Ok(())
}

fn run_game(a: &GameArgs) -> Result<GameResult, Failure> {
    let proof = if a.problem {
        euf_bridge(&load_problem(&a.file)?, a.strategy.into())?.proof
    } else {
        ProofTree::parse(&read(&a.file)?)?
    };
    // A proof that is not a valid local refutation is bad input.
    Ok(play(&proof)?)
}

fn labels(g: &GameResult, side: Side) -> Vec<String> {
    g.cut.side(side).iter().map(|&i| g.proof.label(i).to_string()).collect()
}

fn run_game_cut(a: GameArgs) -> CliResult {
    let g = run_game(&a)?;
    let (ta, tb) = (labels(&g, Side::A), labels(&g, Side::B));
    if a.json {
        println!("{}", json!({ "t_a": ta, "t_b": tb }));
    } else {
        println!("T_A:");
        ta.iter().for_each(|l| println!("  {l}"));
        println!("T_B:");
        tb.iter().for_each(|l| println!("  {l}"));
    }
    Ok(())
}

fn run_game_interpolate(a: GameArgs) -> CliResult {
    let g = run_game(&a)?;
    if a.json {
        let value = json!({
            "interpolant": g.interpolant.to_string(),
            "rounds": g.run.rounds(),
            "s_a": labels(&g, Side::A),
            "s_b": labels(&g, Side::B),
        });
        println!("{value}");
    } else {
        println!("{}", g.interpolant);
        eprintln!("rounds: {}", g.run.rounds());
    }
    Ok(())
}

fn run_gen(a: GenArgs) -> CliResult {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let f = a.family;
    let text = match (f.chain, f.ladder, f.split, f.soup) {
        (Some(n), ..) => chain(n, &mut rng),
        (_, Some(n), ..) => ladder(n),
        (_, _, Some(n), _) => split(n.max(1), &mut rng),
        (.., Some(n)) => soup(n, &mut rng),
        _ => unreachable!("clap requires one family"),
    };
    print!("{text}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Interpolate(a) => run_interpolate(a),
        Command::Verify { problem, interpolant, json } => run_verify(&problem, &interpolant, json),
        Command::Closure { file, dot } => run_closure(&file, dot),
        Command::Game { action: GameAction::Cut(a) } => run_game_cut(a),
        Command::Game { action: GameAction::Interpolate(a) } => run_game_interpolate(a),
        Command::Gen(a) => run_gen(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("eufi: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
