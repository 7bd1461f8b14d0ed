//! `parkdist` — exact and Monte Carlo computations for the probability
//! distribution that a uniform random parking function induces on
//! permutations.
//!
//! Exit codes: 0 when the command succeeds (and any checked verdict
//! passes), 1 when a `verify` battery or `experiment` threshold fails,
//! 2 on usage, validation, or resource-cap errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{CliError, Outcome};
use output::{emit, render_report, Format};
use parkdist::Caps;

#[derive(Parser)]
#[command(
    name = "parkdist",
    version,
    about = "Distributions induced on permutations by uniform random parking functions",
    propagate_version = true
)]
struct Cli {
    /// Number of worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Exact rational arithmetic.
    Exact,
    /// Floating-point evaluation.
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PmfKind {
    /// Probability of a full permutation.
    Perm,
    /// Law of the space taken by the last car.
    LastCar,
    /// Joint law of the spaces taken by the last j cars.
    LastJ,
    /// Joint law of the spaces taken by the last two cars.
    LastTwo,
    /// Law of the number of left-to-right maxima among the first j spaces.
    LrmaxJoint,
    /// Expected number of left-to-right maxima.
    LrmaxExpect,
    /// Borel law, the large-n limit of n+1 minus the last car's space.
    Borel,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Stat {
    /// Product of ascending-run lengths (exact integer).
    L,
    /// Natural log of the run-length product.
    LogL,
    /// Number of left-to-right maxima.
    Lrmax,
    /// Space taken by the last car.
    LastSpace,
    /// All of the above.
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentName {
    /// Concentration of the averaged log run-length product of a uniform
    /// random permutation.
    Wlln,
    /// Last-car law against the Borel limit, in total variation.
    Borel,
    /// Monotone growth of the probability that the last j cars park in
    /// increasing order.
    IncreasingOrder,
    /// Last-j joint cells against the product-of-Borel limit.
    LastJLimit,
    /// First-car marginals against their exact closed forms.
    FirstCar,
    /// Growth order of the expected number of left-to-right maxima.
    LrmaxOrder,
}

#[derive(Subcommand)]
enum Command {
    /// Cross-check the exact formulas against brute-force enumeration.
    Verify {
        /// Largest n to enumerate (default: min(6, enumeration cap)).
        #[arg(long)]
        n: Option<usize>,
        /// Seed for the sampler spot checks.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Evaluate an exact law (or the float-only Borel law).
    Pmf {
        #[arg(value_enum)]
        kind: PmfKind,
        #[arg(long)]
        n: Option<usize>,
        /// Number of cells for the borel table (default 20).
        #[arg(long)]
        j: Option<usize>,
        /// Comma-separated positions, e.g. --positions 2,5.
        #[arg(long, value_delimiter = ',')]
        positions: Option<Vec<usize>>,
        /// One-line permutation, e.g. --permutation "3 1 2".
        #[arg(long)]
        permutation: Option<String>,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
    },
    /// Draw seeded parking functions and report per-draw statistics.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Stat::All)]
        stat: Stat,
    },
    /// Run a named Monte Carlo or ordering experiment; exit 1 if it fails.
    Experiment {
        #[arg(value_enum)]
        name: ExperimentName,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        j: Option<usize>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// List preference vectors with outcomes and induced permutations.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Keep only parking functions.
        #[arg(long)]
        parking_only: bool,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let caps = Caps::from_env();
    let outcome = match cli.command {
        Command::Verify { n, seed } => commands::verify(n, seed, &caps)?,
        Command::Pmf { kind, n, j, positions, permutation, mode } => {
            commands::pmf(kind, n, j, positions, permutation, mode, &caps)?
        }
        Command::Sample { n, samples, seed, stat } => commands::sample(n, samples, seed, stat)?,
        Command::Experiment { name, n, j, samples, seed } => {
            commands::experiment(name, n, j, samples, seed, &caps)?
        }
        Command::Enumerate { n, parking_only } => commands::enumerate(n, parking_only, &caps)?,
    };
    let (content, pass) = match &outcome {
        Outcome::Table { table, pass } => (table.render(cli.format), *pass),
        Outcome::Report(report) => (render_report(report, cli.format), report.pass),
    };
    emit(cli.out.as_deref(), &content)?;
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads < 1 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        // Ignore the error if a global pool already exists (e.g. in tests).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
