mod bench;
mod commands;
mod report;

use clap::{ArgGroup, Args, Parser, Subcommand};
use slsn::gadgets::GadgetKind;
use slsn::rational::parse_rational;
use slsn::{Rational, SlsnError};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "slsn", version, about = "Shallow-light Steiner network solvers and hardness gadgets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Leave wall-clock time out of the output.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Worker threads for solvers that split their search.
    #[arg(long, global = true, default_value_t = 1, value_parser = parse_jobs)]
    jobs: usize,
    /// Print an aligned table instead of JSON.
    #[arg(long, global = true)]
    table: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the demand graph of an instance.
    Classify(ClassifyArgs),
    /// Solve an instance, picking the solver from the demand class.
    Solve(SolveArgs),
    /// Build a gadget instance from an MCC input.
    Gadget(GadgetArgs),
    /// Check a solution against an instance.
    Verify(VerifyArgs),
    /// Exhaustive ground truth for small inputs.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Seeded solver-versus-oracle runs as CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
pub struct ClassifyArgs {
    pub instance: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Read a bare `s t` edge list instead of an instance.
    #[arg(long)]
    pub demands_only: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("solver").multiple(false)))]
pub struct SolveArgs {
    pub instance: PathBuf,
    /// Exact solver for unit lengths.
    #[arg(long, group = "solver")]
    pub exact_const: bool,
    /// Exact solver for unit costs and integer lengths.
    #[arg(long, group = "solver")]
    pub unit_cost: bool,
    /// Exact star solver for unit lengths.
    #[arg(long, group = "solver")]
    pub star: bool,
    #[arg(long, group = "solver")]
    pub approx_const: bool,
    #[arg(long, group = "solver")]
    pub approx_star: bool,
    #[arg(long, default_value = "1/4", value_parser = parse_rat)]
    pub eps: Rational,
    /// Run the constant-demand approximation on hard demand graphs.
    #[arg(long)]
    pub approx_anyway: bool,
    /// k used when classifying.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Also write the bare solution JSON here.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct GadgetArgs {
    #[arg(long, value_parser = parse_kind)]
    pub case: GadgetKind,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub mcc: PathBuf,
    #[arg(long, requires = "eps")]
    pub poly_cost: bool,
    #[arg(long, requires = "poly_cost", value_parser = parse_rat)]
    pub eps: Option<Rational>,
    /// Demand graph for `bipartite` and `general`.
    #[arg(long)]
    pub demand_graph: Option<PathBuf>,
    /// Demand-graph vertices for r_1, r_2 and the leaves (bipartite only).
    #[arg(long)]
    pub side_map: Option<String>,
    /// Instance output; `.json` selects the JSON form.
    #[arg(short, long)]
    pub output: PathBuf,
    /// A multicolored clique, e.g. `0,1,2`; writes its witness solution.
    #[arg(long)]
    pub emit_witness: Option<String>,
    /// Where the witness goes; defaults to `<output>.witness.json`.
    #[arg(long, requires = "emit_witness")]
    pub witness_out: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    pub instance: PathBuf,
    /// Solution JSON, or a solve report holding one.
    #[arg(long)]
    pub solution: PathBuf,
}

#[derive(Subcommand)]
pub enum OracleCommand {
    /// Minimum-cost feasible edge subset by full enumeration.
    Slsn {
        instance: PathBuf,
        #[arg(long, default_value_t = 20)]
        max_edges: usize,
    },
    /// Minimum-cost simple path within a length bound.
    Path {
        instance: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// Defaults to the instance bound.
        #[arg(long, value_parser = parse_rat)]
        bound: Option<Rational>,
    },
    /// Multicolored clique and densest selection.
    Mcc { mcc: PathBuf },
}

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = "all", value_parser = ["exact", "unit-cost", "star", "approx-const", "approx-star", "all"])]
    pub suite: String,
    /// Instances per suite.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
}

fn parse_rat(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational"))
}

fn parse_kind(s: &str) -> Result<GadgetKind, String> {
    GadgetKind::parse(s).ok_or_else(|| {
        let names: Vec<_> = GadgetKind::ALL.iter().map(|k| k.name()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

fn parse_jobs(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(j) if j > 0 => Ok(j),
        _ => Err("expected a positive integer".into()),
    }
}

/// How a successful dispatch ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok,
    Refused,
    Infeasible,
}

pub struct Ctx {
    pub command: String,
    pub timing: bool,
    pub jobs: usize,
    pub table: bool,
}

impl Ctx {
    pub fn emit(&self, r: &report::RunReport) {
        if self.table {
            out(&r.to_table());
        } else {
            out(&(r.to_json() + "\n"));
        }
    }
}

/// Writes to stdout; a closed pipe is not an error.
pub fn out(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let ctx = Ctx {
        command: std::iter::once("slsn").chain(argv[1..].iter().map(String::as_str)).collect::<Vec<_>>().join(" "),
        timing: !cli.no_timing,
        jobs: cli.jobs,
        table: cli.table,
    };
    let result = match cli.command {
        Command::Classify(a) => commands::classify(&ctx, a),
        Command::Solve(a) => commands::solve(&ctx, a),
        Command::Gadget(a) => commands::gadget(&ctx, a),
        Command::Verify(a) => commands::verify(&ctx, a),
        Command::Oracle(c) => commands::oracle(&ctx, c),
        Command::Bench(a) => bench::run(&ctx, a),
    };
    match result {
        Ok(Exit::Ok) => ExitCode::SUCCESS,
        Ok(Exit::Refused) => ExitCode::from(2),
        Ok(Exit::Infeasible) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, SlsnError::Infeasible) { 3 } else { 1 })
        }
    }
}
