//! `selinfer` command-line front end.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CliError;
use selinfer::toy::ToyVariant;

fn parse_variant(s: &str) -> Result<ToyVariant, String> {
    s.parse().map_err(|e: selinfer::Error| e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "selinfer",
    version,
    about = "Selective inference procedures and their Monte Carlo checks"
)]
struct Cli {
    /// Worker threads for simulations and lambda paths (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a two-hypothesis toy rule at one point, or tabulate its regions.
    Toy(ToyArgs),
    /// Run the winner procedures A-D on a vector of p-values.
    Winner(WinnerArgs),
    /// Conditional and Q-value Bonferroni on split p-values.
    Datasplit(DatasplitArgs),
    /// Selective p-values and intervals for lasso coefficients.
    Lasso(LassoArgs),
    /// Run a Monte Carlo suite and write its CSV.
    Sim(SimArgs),
    /// Solve for the calibrated level of the directional example.
    Calibrate(CalibrateArgs),
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["p1", "grid"])))]
struct ToyArgs {
    #[arg(long, requires_all = ["p2", "variant"])]
    p1: Option<f64>,
    #[arg(long, requires = "p1")]
    p2: Option<f64>,
    #[arg(long, default_value_t = 0.7)]
    lambda: f64,
    #[arg(long, default_value_t = 0.3)]
    alpha: f64,
    /// cond-sel-fwer, cond-sel-fdr, cond-sel-fcr, cond-improved-fdr, selective-improved-fdr or mabh
    #[arg(long, requires = "p1", value_parser = parse_variant)]
    variant: Option<ToyVariant>,
    /// Tabulate every variant on an N×N grid of cell midpoints.
    #[arg(long, value_name = "N", requires = "out")]
    grid: Option<usize>,
    #[arg(long, value_name = "FILE")]
    out: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProcedureArg {
    A,
    B,
    C,
    D,
    All,
}

#[derive(Debug, Args)]
struct WinnerArgs {
    /// Comma-separated p-values.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    p: Vec<f64>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, value_enum, ignore_case = true, default_value = "all")]
    procedure: ProcedureArg,
}

#[derive(Debug, Args)]
struct DatasplitArgs {
    /// Selection-half p-values, comma-separated.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    p1: Vec<f64>,
    /// Inference-half p-values, comma-separated.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    p2: Vec<f64>,
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScaleArg {
    /// glmnet's per-observation scale: multiplied by √n·sd(y).
    Glmnet,
    /// The penalty of ½‖y - Xβ‖² + λ‖β‖₁ as given.
    Objective,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("penalty").required(true).args(["lambda", "path"])))]
struct LassoArgs {
    #[arg(long, value_name = "FILE")]
    data: std::path::PathBuf,
    #[arg(long, value_name = "COL")]
    response: String,
    #[arg(long)]
    lambda: Option<f64>,
    /// Linear grid of STEPS penalties from LMIN to LMAX inclusive.
    #[arg(long, num_args = 3, value_names = ["LMIN", "LMAX", "STEPS"])]
    path: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.9)]
    level: f64,
    #[arg(long, value_enum, default_value = "glmnet")]
    scale: ScaleArg,
    /// Known noise variance; estimated from the full least-squares fit otherwise.
    #[arg(long)]
    sigma2: Option<f64>,
    /// Keep predictors on their original scale (still centred).
    #[arg(long)]
    no_standardize: bool,
    #[arg(long, value_name = "FILE")]
    out: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Winner,
    LiuExample,
    Toy,
    Datasplit,
    Directional,
}

#[derive(Debug, Args)]
struct SimArgs {
    #[arg(long, value_enum)]
    suite: SuiteArg,
    #[arg(long, env = "SELINFER_SEED", default_value_t = 42)]
    seed: u64,
    /// Replicates; defaults to 10⁴ (winner), 10⁶ (liu-example) or 10⁵ (others).
    #[arg(long)]
    reps: Option<u64>,
    #[arg(long, value_name = "FILE")]
    out: Option<std::path::PathBuf>,
    /// Error rate; defaults to 0.05, or 0.1 (liu-example) and 0.3 (toy).
    #[arg(long)]
    alpha: Option<f64>,
    /// Effect size of false nulls (winner, toy, datasplit).
    #[arg(long)]
    shift: Option<f64>,
    /// Number of hypotheses (winner, datasplit).
    #[arg(long)]
    n: Option<usize>,
    /// Largest number of false nulls (winner) or number of false nulls (datasplit).
    #[arg(long)]
    alternatives: Option<usize>,
    /// Selection threshold (toy, datasplit) or lasso penalty (liu-example).
    #[arg(long)]
    lambda: Option<f64>,
    /// Margin of the directional example.
    #[arg(long)]
    delta: Option<f64>,
    /// Resolution of the toy region check.
    #[arg(long, value_name = "N")]
    grid: Option<usize>,
}

#[derive(Debug, Args)]
struct CalibrateArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    delta: f64,
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Other(e.to_string()))?;
    }
    match cli.command {
        Command::Toy(a) => commands::toy(a),
        Command::Winner(a) => commands::winner(a),
        Command::Datasplit(a) => commands::datasplit(a),
        Command::Lasso(a) => commands::lasso(a),
        Command::Sim(a) => commands::sim(a),
        Command::Calibrate(a) => commands::calibrate(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
