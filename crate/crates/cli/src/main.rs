//! `mindswap`: solve, check and search mind-swap machine plans.
//!
//! Exit codes: 0 ok, 1 verification failed, 2 bad input, 3 unsolvable,
//! 4 search budget exhausted.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mindswap::infinite::{
    invert_finitary_two_step, invert_shift_three_step, render, render_steps, sigma_star,
    verify_infinite_plan, CarrierPoint, InfiniteError, TailMap,
};
use mindswap::{
    lower_bound, search_min_plan_with, solve_m_machine, solve_three_machine_optimal,
    solve_two_machine, verify_plan, Element, MachineError, MachineMove, OracleError,
    Permutation, PlanDocument, RuleSet, SearchOptions, VerificationReport,
};

#[derive(Parser)]
#[command(name = "mindswap", version, about = "Undo mind swaps without reusing a group of seats")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a plan and print it as a plan document.
    Solve {
        /// Scramble in cycle notation, e.g. "(1 2)(3 4 5)"; empty means none.
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        /// Seats per machine use.
        #[arg(long = "m", default_value_t = 2)]
        machine_size: usize,
        /// Defaults to keeler2 for m = 2 and general_m otherwise.
        #[arg(long, value_enum)]
        solver: Option<Solver>,
    },
    /// Check a plan document against its rules.
    Verify {
        #[arg(long)]
        plan: PathBuf,
        /// Overrides the target stored in the document.
        #[arg(long)]
        target: Option<String>,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Find a shortest plan by exhaustive search.
    Oracle {
        #[arg(long)]
        target: String,
        #[arg(long = "m")]
        machine_size: usize,
        /// Number of outsiders x1..xd.
        #[arg(long = "d")]
        outsiders: usize,
        #[arg(long, default_value_t = 12)]
        max_steps: usize,
        #[arg(long, default_value_t = mindswap::oracle::DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Show the infinite-machine constructions step by step.
    Infinite {
        #[command(subcommand)]
        demo: Demo,
        /// Tail points shown before each ellipsis.
        #[arg(long, global = true, default_value_t = mindswap::infinite::DEFAULT_HORIZON)]
        horizon: usize,
    },
}

#[derive(Subcommand)]
enum Demo {
    /// Undo a = (1 2 3 ⋯) in three swaps.
    Shift3,
    /// Undo the cycle (a1 ⋯ ak) in two swaps.
    Star {
        #[arg(long)]
        k: u64,
    },
    /// Undo any finitary permutation in two swaps.
    Finitary2 {
        #[arg(long)]
        sigma: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Solver {
    #[value(name = "keeler2")]
    Keeler2,
    #[value(name = "general_m")]
    GeneralM,
    #[value(name = "optimal3")]
    Optimal3,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn parse_target(text: &str) -> Result<Permutation, Failure> {
    text.parse().map_err(|e| fail(2, format!("cannot parse target {text:?}: {e}")))
}

fn report_lines(report: &VerificationReport) -> String {
    let mut out = format!(
        "product ok: {}\nsteps: {}\nviolations: {}",
        report.product_ok,
        report.step_count,
        report.rule_violations.len()
    );
    for v in &report.rule_violations {
        out.push_str(&format!("\n  move {}: {:?}", v.move_index, v.kind));
    }
    out
}

fn solve(target: &str, m: usize, solver: Option<Solver>) -> Result<(), Failure> {
    let sigma = parse_target(target)?;
    let solver = solver.unwrap_or(if m == 2 { Solver::Keeler2 } else { Solver::GeneralM });
    let (name, moves, outsiders): (&str, Vec<MachineMove>, Vec<Element>) = match solver {
        Solver::Keeler2 => {
            if m != 2 {
                return Err(fail(2, "keeler2 needs --m 2"));
            }
            let plan = solve_two_machine(&sigma).map_err(|e| fail(3, e.to_string()))?;
            ("keeler2", plan.machine_moves(), vec![plan.x, plan.y])
        }
        Solver::GeneralM => {
            let plan = solve_m_machine(&sigma, m).map_err(|e| match e {
                MachineError::InvalidMachineSize { .. } => fail(2, e.to_string()),
                e => fail(3, e.to_string()),
            })?;
            ("general_m", plan.moves, plan.outsider_pool)
        }
        Solver::Optimal3 => {
            if m != 3 {
                return Err(fail(2, "optimal3 needs --m 3"));
            }
            let plan = solve_three_machine_optimal(&sigma).map_err(|e| fail(3, e.to_string()))?;
            ("optimal3", plan.moves, vec![plan.outsider])
        }
    };
    let bound = if m == 3 { lower_bound(&sigma).ok() } else { None };
    let doc = PlanDocument::new(m, &sigma, outsiders, &moves, name, bound);
    print!("{}", doc.to_json());

    let report = verify_plan(&sigma, &moves, &doc.rules());
    let used: Vec<String> = doc
        .outsiders
        .iter()
        .filter(|x| moves.iter().any(|mv| mv.contains(**x)))
        .map(ToString::to_string)
        .collect();
    eprintln!("{}\noutsiders used: {}", report_lines(&report), used.join(" "));
    if report.is_clean() {
        Ok(())
    } else {
        Err(fail(1, "plan failed its own verification"))
    }
}

fn verify(plan: &PathBuf, target: Option<&str>, json: bool) -> Result<(), Failure> {
    let text = fs::read_to_string(plan).map_err(|e| fail(2, format!("cannot read {}: {e}", plan.display())))?;
    let doc = PlanDocument::from_json(&text).map_err(|e| fail(2, e.to_string()))?;
    let sigma = match target {
        Some(t) => parse_target(t)?,
        None => doc.target_permutation().map_err(|e| fail(2, e.to_string()))?,
    };
    let report = verify_plan(&sigma, &doc.machine_moves(), &doc.rules());
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        println!("{}", report_lines(&report));
        println!("{}", if report.is_clean() { "clean" } else { "NOT clean" });
    }
    if report.is_clean() {
        Ok(())
    } else {
        Err(fail(1, "verification failed"))
    }
}

fn oracle(target: &str, m: usize, d: usize, max_steps: usize, budget: u64) -> Result<(), Failure> {
    let sigma = parse_target(target)?;
    let rules = RuleSet::with_outsider_count(m, d);
    let options = SearchOptions { max_steps, node_budget: budget };
    let outcome = search_min_plan_with(&sigma, &rules, &options).map_err(|e| match e {
        OracleError::BudgetExceeded { .. } => fail(4, e.to_string()),
        e => fail(2, e.to_string()),
    })?;
    match outcome.plan {
        Some(plan) => {
            println!("minimal length: {}", plan.len());
            for (i, mv) in plan.iter().enumerate() {
                println!("{:>3}  {mv}", i + 1);
            }
            eprintln!("nodes searched: {}", outcome.nodes);
            Ok(())
        }
        None => {
            println!("none within bound");
            eprintln!("nodes searched: {}", outcome.nodes);
            Err(fail(3, format!("no plan of at most {max_steps} moves")))
        }
    }
}

fn infinite(demo: &Demo, horizon: usize) -> Result<(), Failure> {
    let z = CarrierPoint::named("z");
    let bad = |e: InfiniteError| fail(2, e.to_string());
    let (plan, target): (Vec<TailMap>, TailMap) = match demo {
        Demo::Shift3 => (
            invert_shift_three_step(0, &z).map_err(bad)?.to_vec(),
            TailMap::shift(0, -1).with_fixed(z.clone()).map_err(bad)?,
        ),
        Demo::Star { k } => {
            let cycle: Vec<u64> = (1..=*k).collect();
            let inverse = (1..=*k).map(|i| (i, if i == 1 { *k } else { i - 1 }));
            (
                sigma_star(0, &cycle, &z).map_err(bad)?.to_vec(),
                TailMap::from_finitary(0, inverse).map_err(bad)?.with_fixed(z.clone()).map_err(bad)?,
            )
        }
        Demo::Finitary2 { sigma } => {
            let sigma = parse_target(sigma)?;
            let plan = invert_finitary_two_step(&sigma, 0, &z).map_err(bad)?;
            let pairs = sigma.inverse().mapping().map(|(a, b)| (a.index() as u64, b.index() as u64)).collect::<Vec<_>>();
            let target = if sigma.is_identity() {
                TailMap::identity()
            } else {
                TailMap::from_finitary(0, pairs).map_err(bad)?.with_fixed(z.clone()).map_err(bad)?
            };
            (plan, target)
        }
    };
    let report = verify_infinite_plan(&plan, &target);
    for (i, (f, step)) in plan.iter().zip(&report.steps).enumerate() {
        println!("Step {}: {:?}", i + 1, step.classification);
        for line in render_steps(f, horizon).lines() {
            println!("    {line}");
        }
        println!("    domain:       {}", step.domain);
        println!("    participants: {}", step.participants);
    }
    let written: Vec<String> = plan.iter().rev().map(|f| render(f, horizon)).collect();
    println!("product: {}", if written.is_empty() { "()".to_string() } else { written.join("") });
    println!("matches target inverse: {}", report.matches_target);
    println!("participant sets distinct: {}", report.participants_distinct);
    println!("domains distinct: {}", report.domains_distinct);
    if report.is_clean() {
        Ok(())
    } else {
        Err(fail(1, "construction does not check out"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve { target, machine_size, solver } => solve(target, *machine_size, *solver),
        Command::Verify { plan, target, json } => verify(plan, target.as_deref(), *json),
        Command::Oracle { target, machine_size, outsiders, max_steps, budget } => {
            oracle(target, *machine_size, *outsiders, *max_steps, *budget)
        }
        Command::Infinite { demo, horizon } => infinite(demo, *horizon),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
