//! `actcover` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or internal error, 2 infeasible instance,
//! 3 certification violation.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use actcover::bench::{certify, run, Algorithm, RunOptions, Subsolver};
use actcover::bounds::{bound_table, format_table, table1, BoundTable};
use actcover::generators::{generate, Family, FamilySpec};
use actcover::io::{digest, parse_instance, write_instance};
use actcover::oracle::{exact_solve, ExactLimits, ExactResult, OracleError};
use actcover::report::{bench, SolveReport, SCHEMA_VERSION};
use actcover::uniform::TieBreak;
use actcover::{Instance, NodeId, Rational, Scalar};
use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "actcover", version, about = "Activation edge-cover solvers, exact oracle and bound tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and print a report.
    Solve(SolveArgs),
    /// Solve an instance exactly by branch-and-bound.
    Exact(ExactArgs),
    /// Generate a seeded instance.
    Gen(GenArgs),
    /// Certify solvers on a seed range of a family.
    Bench(BenchArgs),
    /// Print the bound functions.
    Bounds(BoundsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Auto,
    General,
    LocallyUniform,
    UnitA1,
    UnitA2,
}

#[derive(Clone, Copy, ValueEnum)]
enum TieBreakArg {
    LowestId,
    /// Follow `--order`; without it, highest id first.
    Adversarial,
}

#[derive(Clone, Copy, ValueEnum)]
enum SubsolverArg {
    Exact,
    Greedy,
}

impl From<SubsolverArg> for Subsolver {
    fn from(s: SubsolverArg) -> Self {
        match s {
            SubsolverArg::Exact => Subsolver::Exact,
            SubsolverArg::Greedy => Subsolver::Greedy,
        }
    }
}

#[derive(Args)]
struct OracleArgs {
    /// Refuse instances with more terminals than this.
    #[arg(long, default_value_t = 10)]
    max_terminals: usize,
    /// Stop the search after this many expansions.
    #[arg(long)]
    max_expansions: Option<u64>,
    /// Stop the search after this many milliseconds.
    #[arg(long)]
    time_budget_ms: Option<u64>,
    /// Run regardless of instance size.
    #[arg(long)]
    force: bool,
}

impl OracleArgs {
    fn limits(&self) -> ExactLimits {
        ExactLimits {
            max_terminals: self.max_terminals,
            max_nodes: None,
            max_expansions: self.max_expansions,
            time_budget: self.time_budget_ms.map(Duration::from_millis),
            force: self.force,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file.
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Auto)]
    algorithm: AlgorithmArg,
    #[arg(long, value_enum, default_value_t = TieBreakArg::LowestId)]
    tie_break: TieBreakArg,
    /// Facility priority for the adversarial tie-break: comma-separated
    /// names, or `@file` holding a JSON array of names.
    #[arg(long)]
    order: Option<String>,
    /// k-set-cover subsolver of unit-a2.
    #[arg(long, value_enum, default_value_t = SubsolverArg::Exact)]
    subsolver: SubsolverArg,
    /// Also run the exact oracle and certify the output.
    #[arg(long)]
    exact_check: bool,
    #[command(flatten)]
    oracle: OracleArgs,
    /// Include wall time in the report.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExactArgs {
    input: PathBuf,
    #[command(flatten)]
    oracle: OracleArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    terminals: Option<usize>,
    /// Edge count of the graph families.
    #[arg(long)]
    edges: Option<usize>,
    #[arg(long)]
    levels: Option<usize>,
    /// Slope target of the set-cover and facility-location families.
    #[arg(long)]
    theta: Option<String>,
    /// Uniform family with unit weights and thresholds.
    #[arg(long)]
    unit_weights: bool,
}

impl FamilyArgs {
    fn spec(&self, seed: u64) -> anyhow::Result<FamilySpec> {
        let mut spec = FamilySpec::new(self.family, seed);
        if let Some(n) = self.nodes {
            spec.nodes = n;
        }
        if let Some(t) = self.terminals {
            spec.terminals = t;
        }
        if let Some(m) = self.edges {
            spec.edges = m;
        }
        if let Some(l) = self.levels {
            spec.levels = l;
        }
        if let Some(theta) = &self.theta {
            spec.theta = Rational::parse_literal(theta).ok_or_else(|| anyhow!("bad theta {theta:?}"))?;
        }
        spec.unit_weights = self.unit_weights;
        Ok(spec)
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the adversarial facility order (tight73 only).
    #[arg(long)]
    order_out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Half-open seed range `a..b`.
    #[arg(long, default_value = "0..200")]
    seeds: String,
    /// Comma-separated algorithm ids; defaults to the family's natural solver.
    #[arg(long, value_delimiter = ',')]
    algorithms: Vec<Algorithm>,
    #[arg(long, value_enum, default_value_t = SubsolverArg::Exact)]
    subsolver: SubsolverArg,
    #[command(flatten)]
    oracle: OracleArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    /// Comma-separated θ values.
    #[arg(long, value_delimiter = ',')]
    theta: Vec<f64>,
    /// The standard θ grid.
    #[arg(long)]
    table1: bool,
    /// Emit JSON instead of a text table.
    #[arg(long)]
    json: bool,
}

/// Error carrying an exit code.
struct Exit(u8, anyhow::Error);

impl From<anyhow::Error> for Exit {
    fn from(e: anyhow::Error) -> Self {
        let infeasible = e.chain().any(|c| {
            matches!(
                c.downcast_ref::<actcover::Error>(),
                Some(actcover::Error::Infeasible(_) | actcover::Error::IsolatedTerminal(_))
            )
        });
        Exit(if infeasible { 2 } else { 1 }, e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Exact(a) => cmd_exact(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Bounds(a) => cmd_bounds(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

fn load(path: &Path) -> anyhow::Result<Instance<Rational>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("loading {}", path.display()))
}

fn oracle_error(e: OracleError<Rational>) -> Exit {
    match e {
        OracleError::Infeasible(msg) => Exit(2, anyhow!("infeasible: {msg}")),
        other => Exit(1, anyhow!("{other}")),
    }
}

fn parse_order(inst: &Instance<Rational>, spec: &str) -> anyhow::Result<Vec<NodeId>> {
    let names: Vec<String> = match spec.strip_prefix('@') {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            serde_json::from_str(&text).with_context(|| format!("{path} is not a JSON array of names"))?
        }
        None => spec.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
    };
    names.iter().map(|n| inst.id(n).ok_or_else(|| anyhow!("unknown node {n:?} in order"))).collect()
}

fn cmd_solve(args: SolveArgs) -> Result<(), Exit> {
    let inst = load(&args.input)?;
    let algorithm = match args.algorithm {
        AlgorithmArg::Auto => Algorithm::auto(&inst),
        AlgorithmArg::General => Algorithm::General,
        AlgorithmArg::LocallyUniform => Algorithm::LocallyUniform,
        AlgorithmArg::UnitA1 => Algorithm::UnitA1,
        AlgorithmArg::UnitA2 => Algorithm::UnitA2,
    };
    let tie_break = match (args.tie_break, &args.order) {
        (TieBreakArg::LowestId, None) => TieBreak::LowestId,
        (TieBreakArg::LowestId, Some(_)) => return Err(anyhow!("--order needs --tie-break adversarial").into()),
        (TieBreakArg::Adversarial, Some(order)) => TieBreak::Priority(parse_order(&inst, order)?),
        (TieBreakArg::Adversarial, None) => TieBreak::Priority((0..inst.node_count()).rev().map(NodeId).collect()),
    };
    let options = RunOptions { tie_break, subsolver: args.subsolver.into() };
    let start = Instant::now();
    let outcome = run(&inst, algorithm, &options).map_err(anyhow::Error::from)?;
    let elapsed = start.elapsed();
    let (exact, violations) = if args.exact_check {
        let opt = exact_solve(&inst, &args.oracle.limits()).map_err(oracle_error)?;
        let failed: Vec<_> = certify(&inst, &outcome, &opt)
            .map_err(anyhow::Error::from)?
            .into_iter()
            .filter(|c| !c.passed)
            .collect();
        (Some(opt), failed)
    } else {
        (None, Vec::new())
    };
    let report = SolveReport::new(&inst, &outcome, exact.as_ref(), violations, args.timing.then_some(elapsed))
        .map_err(anyhow::Error::from)?;
    emit(args.out.as_deref(), &to_json(&report))?;
    if !report.violations.is_empty() {
        let names: Vec<&str> = report.violations.iter().map(|c| c.name).collect();
        return Err(Exit(3, anyhow!("certification failed: {}", names.join(", "))));
    }
    Ok(())
}

fn exact_report(inst: &Instance<Rational>, res: &ExactResult<Rational>) -> serde_json::Value {
    let assignment: Vec<_> = inst
        .nodes()
        .filter(|&v| *res.assignment.get(v) != Rational::of_usize(0))
        .map(|v| json!({ "node": inst.name(v), "value": res.assignment.get(v).to_literal() }))
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "instance_digest": digest(inst),
        "value": res.value.to_literal(),
        "optimal": res.optimal,
        "expansions": res.expansions,
        "assignment": assignment,
    })
}

fn cmd_exact(args: ExactArgs) -> Result<(), Exit> {
    let inst = load(&args.input)?;
    let res = match exact_solve(&inst, &args.oracle.limits()) {
        Ok(res) => res,
        Err(OracleError::BudgetExceeded(best)) => {
            eprintln!("warning: budget exceeded, reporting the best cover found");
            *best
        }
        Err(e) => return Err(oracle_error(e)),
    };
    emit(args.out.as_deref(), &to_json(&exact_report(&inst, &res)))?;
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<(), Exit> {
    let spec = args.family.spec(args.seed)?;
    let generated = generate(&spec).map_err(anyhow::Error::from)?;
    emit(args.out.as_deref(), &write_instance(&generated.instance))?;
    match (&generated.order, &args.order_out) {
        (Some(order), Some(path)) => {
            let names: Vec<&str> = order.iter().map(|&v| generated.instance.name(v)).collect();
            emit(Some(path), &to_json(&names))?;
        }
        (None, Some(_)) => return Err(anyhow!("family {} has no adversarial order", spec.family).into()),
        _ => {}
    }
    Ok(())
}

fn parse_seeds(text: &str) -> anyhow::Result<std::ops::Range<u64>> {
    let (a, b) = text.split_once("..").ok_or_else(|| anyhow!("seed range must look like a..b"))?;
    let (a, b): (u64, u64) = (a.trim().parse()?, b.trim().parse()?);
    if a >= b {
        bail!("empty seed range {text}");
    }
    Ok(a..b)
}

fn default_algorithms(family: Family) -> Vec<Algorithm> {
    match family {
        Family::UnitRandom => vec![Algorithm::UnitA1, Algorithm::UnitA2],
        Family::UniformRandom | Family::Tight73 => vec![Algorithm::LocallyUniform],
        _ => vec![Algorithm::General],
    }
}

fn cmd_bench(args: BenchArgs) -> Result<(), Exit> {
    let seeds = parse_seeds(&args.seeds)?;
    let template = args.family.spec(seeds.start)?;
    let algorithms =
        if args.algorithms.is_empty() { default_algorithms(template.family) } else { args.algorithms.clone() };
    let options = RunOptions { tie_break: TieBreak::LowestId, subsolver: args.subsolver.into() };
    let report = bench(&template, seeds, &algorithms, &options, &args.oracle.limits()).map_err(anyhow::Error::from)?;
    emit(args.out.as_deref(), &report.to_json())?;
    if !report.violations.is_empty() {
        return Err(Exit(3, anyhow!("{} certification violation(s)", report.violations.len())));
    }
    Ok(())
}

fn bounds_json(table: &BoundTable) -> String {
    to_json(&table.rows)
}

fn cmd_bounds(args: BoundsArgs) -> Result<(), Exit> {
    let table = match (args.table1, args.theta.is_empty()) {
        (true, true) => table1(),
        (false, false) => bound_table(&args.theta).map_err(anyhow::Error::from)?,
        (true, false) => return Err(anyhow!("--table1 and --theta are exclusive").into()),
        (false, true) => return Err(anyhow!("give --table1 or --theta").into()),
    };
    let text = if args.json { bounds_json(&table) } else { format_table(&table) };
    emit(None, &text)?;
    Ok(())
}
