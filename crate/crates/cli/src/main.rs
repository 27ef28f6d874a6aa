mod commands;
mod manifest;
mod model;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mlzeros::solver::{SolveConfig, Strategy};
use mlzeros::Error;

use crate::model::ModelArgs;

/// Path budget used under `--extended`.
const EXTENDED_BUDGET: u64 = 1_000_000_000_000;

#[derive(Parser, Debug)]
#[command(name = "mlzeros", version, about = "Maximum likelihood degrees with sampling and model zeros")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the likelihood equations for one zero pattern.
    Solve(SolveArgs),
    /// Compute ML table columns.
    Table(TableArgs),
    /// Track known solutions from data with zeros to generic data.
    Homotopy(HomotopyArgs),
    /// Closed-form values and root bounds.
    Formulas(FormulasArgs),
    /// Pair critical points of rank-r and rank-(m-r+1) matrix models.
    Duality(DualityArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Multihomog,
    TotalDegree,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Solver configuration file (TOML, or JSON by extension).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Lift the default path budget for heavy runs.
    #[arg(long)]
    extended: bool,
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    /// Maximum number of paths per solve.
    #[arg(long)]
    budget: Option<u64>,
    /// Directory for archives, tables and the run manifest.
    #[arg(long, default_value = "mlzeros-out")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Data zeros S (comma-separated index labels).
    #[arg(long)]
    zeros: Option<String>,
    /// Model zeros R ⊆ S.
    #[arg(long)]
    model_zeros: Option<String>,
    /// Explicit data vector (comma-separated reals) instead of seeded generic data.
    #[arg(long, allow_hyphen_values = true)]
    real_data: Option<String>,
    /// Solve the unrestricted system and split its solutions by zero pattern.
    #[arg(long)]
    fiber: bool,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Semicolon-separated columns S; an empty entry is S = {}.
    #[arg(long, allow_hyphen_values = true)]
    columns: String,
}

#[derive(Args, Debug)]
struct HomotopyArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Solution archives whose counted points are the start solutions.
    #[arg(long, num_args = 1..)]
    start_archive: Vec<PathBuf>,
    /// Solve every model-zero subproblem for `--zeros` first.
    #[arg(long)]
    auto_subproblems: bool,
    #[arg(long)]
    zeros: Option<String>,
    /// Target data (comma-separated reals); seeded generic data by default.
    #[arg(long, allow_hyphen_values = true)]
    target_u: Option<String>,
    /// Also compute the ML degree and report any deficit.
    #[arg(long)]
    check: bool,
}

#[derive(Args, Debug)]
struct FormulasArgs {
    #[command(subcommand)]
    which: Formula,
    /// Cross-check against the solver on small instances.
    #[arg(long, global = true)]
    check: bool,
}

#[derive(Subcommand, Debug)]
enum Formula {
    /// ML table entries of a generic degree-d hypersurface in P^n.
    Hypersurface {
        d: u32,
        n: usize,
        r: Option<usize>,
        s: Option<usize>,
    },
    /// Conjectured ML degree 2^(n+1) - 6 of 3×n matrices of rank 2.
    #[command(name = "rank2-3xn")]
    Rank2 { n: usize },
    /// Total-degree and multihomogeneous root counts of a model's system.
    Bezout {
        #[command(flatten)]
        model: Box<ModelArgs>,
        #[command(flatten)]
        run: Box<RunArgs>,
        #[arg(long)]
        zeros: Option<String>,
        #[arg(long)]
        model_zeros: Option<String>,
    },
}

#[derive(Args, Debug)]
struct DualityArgs {
    #[arg(long)]
    rows: usize,
    #[arg(long)]
    cols: usize,
    #[arg(long)]
    rank: usize,
    #[arg(long)]
    zeros: Option<String>,
    #[command(flatten)]
    run: RunArgs,
}

impl RunArgs {
    fn config(&self) -> anyhow::Result<SolveConfig> {
        let mut config = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Argument(format!("reading {}: {e}", path.display())))?;
                let is_json = path.extension().is_some_and(|e| e == "json");
                if is_json {
                    serde_json::from_str(&text)
                        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
                } else {
                    toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
                }
            }
            None => SolveConfig::default(),
        };
        config.tracker.seed = self.seed;
        if let Some(s) = self.strategy {
            config.strategy = match s {
                StrategyArg::Multihomog => Strategy::Multihomog,
                StrategyArg::TotalDegree => Strategy::TotalDegree,
            };
        }
        if self.extended {
            config.path_budget = config.path_budget.max(EXTENDED_BUDGET);
        }
        if let Some(b) = self.budget {
            config.path_budget = b;
        }
        config.tracker.validate()?;
        Ok(config)
    }

    fn init_threads(&self) {
        if let Some(n) = self.threads {
            // a second initialization only happens in tests; keep the first pool
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Budget { .. }) => 2,
        Some(Error::DegenerateData(_)) => 3,
        Some(Error::Integrity(_)) => 4,
        Some(
            Error::Argument(_)
            | Error::Dimension { .. }
            | Error::Parse(_)
            | Error::Precondition(_)
            | Error::Json(_),
        ) => 64,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(64) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::Table(a) => commands::table(a),
        Command::Homotopy(a) => commands::homotopy(a),
        Command::Formulas(a) => commands::formulas(a),
        Command::Duality(a) => commands::duality(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
