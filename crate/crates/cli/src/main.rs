use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use hilbert_bohr::algebra::AlgebraShape;
use hilbert_bohr::generators::{ConjugatePair, Guards};
use hilbert_bohr::module::ModuleSpace;
use hilbert_bohr::suite::{self, DimRange, Execution, RunConfig, VerificationReport};
use hilbert_bohr::theorem::{TheoremId, WitnessTarget};
use hilbert_bohr::verifier::witness_search;
use serde::Serialize;

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "bohrcheck", version)]
#[command(about = "Seeded numerical checks of Hilbert C*-module identities and Bohr-type inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded verification suites and emit a JSON report
    Verify(VerifyArgs),
    /// Search for a pair violating one side of the conjugate-exponent equivalence
    Witness(WitnessArgs),
    /// Check the inner-product axioms on all five module families
    Axioms(AxiomArgs),
    /// Print the scalar classical cases
    Demo,
}

#[derive(Args)]
struct GuardArgs {
    /// Exponent guard: p ≥ 1 + eps_p
    #[arg(long, default_value_t = Guards::default().eps_p)]
    eps_p: f64,
    /// Smallest weight in weighted families
    #[arg(long, default_value_t = Guards::default().w_min)]
    w_min: f64,
    /// Conditioning floor for I − tₙ|Tₙ|²
    #[arg(long, default_value_t = Guards::default().delta)]
    delta: f64,
    /// Invertibility floor for the first family member
    #[arg(long, default_value_t = Guards::default().phi_min)]
    phi_min: f64,
}

impl GuardArgs {
    fn guards(&self) -> Guards {
        Guards {
            eps_p: self.eps_p,
            w_min: self.w_min,
            delta: self.delta,
            phi_min: self.phi_min,
            ..Guards::default()
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated theorem ids, or `all`
    #[arg(long, default_value = "all", value_parser = parse_theorems)]
    theorem: Theorems,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Inclusive matrix-size range, `A..B`
    #[arg(long, default_value = "1..4")]
    dims: DimRange,
    /// Algebra block shapes, comma-separated, each like `2` or `2+3`
    #[arg(long, default_value = "1,2,1+1,2+3", value_parser = parse_shapes)]
    blocks: Shapes,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    report: Option<PathBuf>,
    /// Worker threads (defaults to all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Run trials on the calling thread only
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    guards: GuardArgs,
}

#[derive(Args)]
struct WitnessArgs {
    /// `bohr-i` or `bohr-ii`
    #[arg(long)]
    theorem: WitnessTarget,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random pairs to try
    #[arg(long, default_value_t = 200)]
    budget: usize,
    /// Module rank; 1 searches the algebra over itself
    #[arg(long, default_value_t = 1)]
    rank: usize,
    /// Algebra block shape, like `2` or `2+3`
    #[arg(long, default_value = "1")]
    blocks: AlgebraShape,
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    guards: GuardArgs,
}

#[derive(Args)]
struct AxiomArgs {
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "1,2,1+1,2+3", value_parser = parse_shapes)]
    blocks: Shapes,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long)]
    report: Option<PathBuf>,
}

// Lists parse as one value each; clap would otherwise treat `Vec` as repetition.
#[derive(Clone)]
struct Theorems(Vec<TheoremId>);

#[derive(Clone)]
struct Shapes(Vec<AlgebraShape>);

fn parse_theorems(s: &str) -> Result<Theorems, String> {
    TheoremId::parse_list(s).map(Theorems).map_err(|e| e.to_string())
}

fn parse_shapes(s: &str) -> Result<Shapes, String> {
    s.split(',')
        .map(|p| p.trim().parse().map_err(|e: hilbert_bohr::Error| e.to_string()))
        .collect::<Result<_, _>>()
        .map(Shapes)
}

/// Failure classes mapped to exit codes.
enum Failure {
    Config(anyhow::Error),
    Internal(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Internal(e.into())
    }
}

fn config_error(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Config(e.into())
}

/// Writes `value` as pretty JSON to `path`, or to stdout.
fn emit<T: Serialize>(value: &T, path: Option<&Path>) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.3e}"))
}

fn print_summary(report: &VerificationReport) {
    eprintln!("{:<10} {:>6} {:>14} {:>14} {:>8}", "theorem", "trials", "max residual", "min slack", "failed");
    for s in &report.per_theorem {
        eprintln!(
            "{:<10} {:>6} {:>14} {:>14} {:>8}",
            s.id.as_str(),
            s.trials,
            fmt_opt(s.max_identity_residual),
            fmt_opt(s.min_loewner_slack),
            s.failures.len()
        );
        if !s.failures.is_empty() {
            let seeds: Vec<String> = s.failures.iter().take(10).map(u64::to_string).collect();
            eprintln!("  failing seeds: {}", seeds.join(", "));
        }
    }
    eprintln!("{}", if report.pass { "PASS" } else { "FAIL" });
}

fn verify(args: VerifyArgs) -> Result<bool, Failure> {
    let config = RunConfig {
        theorems: args.theorem.0,
        trials: args.trials,
        dims: args.dims,
        block_shapes: args.blocks.0,
        seed: args.seed,
        tol: args.tol,
        guards: args.guards.guards(),
        jobs: args.jobs,
    };
    config.validate().map_err(config_error)?;
    let exec = if args.sequential { Execution::Sequential } else { Execution::default() };
    let report = suite::run(&config, exec)?;
    emit(&report, args.report.as_deref())?;
    print_summary(&report);
    Ok(report.pass)
}

#[derive(Serialize)]
struct WitnessOutput {
    target: WitnessTarget,
    p: f64,
    q: f64,
    budget: usize,
    seed: u64,
    space: String,
    /// Whether theory predicts a violation at this `p`.
    expected: bool,
    witness: Option<hilbert_bohr::verifier::Witness>,
}

fn witness(args: WitnessArgs) -> Result<bool, Failure> {
    let guards = args.guards.guards();
    guards.validate().map_err(config_error)?;
    let pair = ConjugatePair::new(args.p, &guards).map_err(config_error)?;
    if args.budget == 0 {
        return Err(config_error(anyhow::anyhow!("budget must be positive")));
    }
    let space = match args.rank {
        0 => return Err(config_error(anyhow::anyhow!("rank must be positive"))),
        1 => ModuleSpace::self_module(args.blocks),
        k => ModuleSpace::direct_sum(k, args.blocks).map_err(config_error)?,
    };
    let found = witness_search(args.theorem, &pair, &space, args.budget, args.seed)?;
    let expected = match args.theorem {
        WitnessTarget::BohrI => pair.p > 2.0,
        WitnessTarget::BohrII => pair.p < 2.0,
    };
    match &found {
        Some(w) => eprintln!(
            "witness after {} attempt(s): violation {:.6e} (predicted {:.6e})",
            w.attempts, w.violation, w.predicted
        ),
        None => eprintln!("no witness in {} attempts", args.budget),
    }
    let ok = found.is_some() == expected;
    emit(
        &WitnessOutput {
            target: args.theorem,
            p: pair.p,
            q: pair.q,
            budget: args.budget,
            seed: args.seed,
            space: space.label(),
            expected,
            witness: found,
        },
        args.report.as_deref(),
    )?;
    Ok(ok)
}

fn axioms(args: AxiomArgs) -> Result<bool, Failure> {
    if args.trials == 0 {
        return Err(config_error(anyhow::anyhow!("trials must be at least 1")));
    }
    let reports = suite::axiom_suite(&args.blocks.0, args.trials, args.seed)?;
    emit(&reports, args.report.as_deref())?;
    let mut pass = true;
    for r in &reports {
        let ok = r.passes(args.tol);
        pass &= ok;
        eprintln!("{:<20} max residual {:.3e} {}", r.space, r.max_residual(), if ok { "ok" } else { "FAIL" });
    }
    Ok(pass)
}

fn demo() -> Result<bool, Failure> {
    let mut pass = true;
    for case in suite::classical_demo()? {
        let ok = case.residual <= 1e-14;
        pass &= ok;
        println!(
            "{:<15} {:<55} {} = {}  residual {:.1e} {}",
            case.name,
            case.statement,
            case.lhs,
            case.rhs,
            case.residual,
            if ok { "ok" } else { "FAIL" }
        );
    }
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Witness(a) => witness(a),
        Command::Axioms(a) => axioms(a),
        Command::Demo => demo(),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Config(e)) => {
            eprintln!("configuration error: {e:#}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
