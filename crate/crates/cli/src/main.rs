mod commands;
mod input;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use commands::{Params, VerifyCheck, WeylOptions};
use input::CliError;
use report::Report;

/// Exact verification of bracket identities on associative algebras,
/// polynomial algebras and the first Weyl algebra.
#[derive(Debug, Parser)]
#[command(name = "bracketforge", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit the report as JSON on stdout
    #[arg(long, global = true)]
    json: bool,

    /// Maximum total degree of grid monomials
    #[arg(long, global = true, default_value_t = 4)]
    grid_degree: u32,

    /// Highest order probed before reporting "Unbounded at cap N"
    #[arg(long, global = true, default_value_t = 6)]
    cap: u32,

    /// Seed for sampled inputs
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Include wall-clock time in the JSON report
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check identities of a bilinear operation on a finite-dimensional algebra
    Verify(VerifyArgs),
    /// Solve for every bracket satisfying both Leibniz rules
    SolveLeibniz(SolveArgs),
    /// Analyse a first-order Jacobi bracket on a polynomial algebra
    Jacobi(JacobiArgs),
    /// Compute the order or bi-order of a differential operator
    Order(OrderArgs),
    /// Check commutator identities in the first Weyl algebra
    WeylCheck(WeylArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Algebra JSON file or builtin:NAME (q, dual, upper2, gl2, gl3, diag2, ...)
    spec: String,
    /// Bracket JSON file or builtin:commutator|anticommutator|zero
    bracket: String,
    /// Checks to run
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = VerifyCheck::ALL)]
    checks: Vec<VerifyCheck>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Algebra JSON file or builtin:NAME
    spec: String,
}

#[derive(Debug, Args)]
struct JacobiArgs {
    /// JSON with "algebra" and either "lambda"/"gamma" or "bracket"
    input: String,
    /// Number of seeded symmetric perturbations to test
    #[arg(long, default_value_t = 0)]
    perturbations: usize,
}

#[derive(Debug, Args)]
struct OrderArgs {
    /// Polynomial algebra JSON file or builtin:xy|xyz|t|dual-xy
    algebra: String,
    /// Operator JSON file (list of terms) or loday:N
    operator: String,
}

#[derive(Debug, Args)]
struct WeylArgs {
    /// Elements such as "Q^2 P - 3/2 P"; seeded samples are used when empty
    exprs: Vec<String>,
    /// Number of sampled triples and quadruples
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Scalars for the product identity
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1,3,-1/2")]
    lambdas: Vec<String>,
    /// Also run the degree-truncated Leibniz solve with this input degree
    #[arg(long)]
    probe: Option<u32>,
}

const THREADS_ENV: &str = "BRACKETFORGE_THREADS";

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Parse(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Parse(format!("{THREADS_ENV}: {e}")))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify(_) => "verify",
        Command::SolveLeibniz(_) => "solve-leibniz",
        Command::Jacobi(_) => "jacobi",
        Command::Order(_) => "order",
        Command::WeylCheck(_) => "weyl-check",
    }
}

fn run(cli: &Cli, report: &mut Report) -> Result<(), CliError> {
    configure_threads()?;
    let params = Params { seed: cli.seed, grid_degree: cli.grid_degree, cap: cli.cap };
    match &cli.command {
        Command::Verify(a) => commands::verify(report, &a.spec, &a.bracket, &a.checks),
        Command::SolveLeibniz(a) => commands::solve_leibniz(report, &a.spec),
        Command::Jacobi(a) => commands::jacobi(report, &a.input, a.perturbations, params),
        Command::Order(a) => commands::order(report, &a.algebra, &a.operator, params),
        Command::WeylCheck(a) => {
            let opts =
                WeylOptions { exprs: a.exprs.clone(), count: a.count, lambdas: a.lambdas.clone(), probe: a.probe };
            commands::weyl_check(report, &opts, params)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let name = command_name(&cli.command);
    let arguments: Vec<String> = std::env::args().skip(1).collect();
    let mut report = Report::new(name, arguments, cli.seed);

    if let Err(e) = run(&cli, &mut report) {
        eprintln!("error: {e}");
        if cli.json {
            let out = json!({
                "command": name,
                "arguments": report.arguments,
                "error": { "kind": e.kind(), "message": e.to_string() },
                "exit_code": e.exit_code(),
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
        }
        return ExitCode::from(e.exit_code());
    }

    if cli.timing || !cli.json {
        report.elapsed_ms = Some(start.elapsed().as_millis());
    }
    if cli.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
