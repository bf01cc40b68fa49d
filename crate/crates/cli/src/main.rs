use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod report;

use report::{CliError, Report};

#[derive(Parser, Debug)]
#[command(name = "gifs-dim", version, about = "Dimension estimates for graph-directed affine IFS")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// System description file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Root-solver tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Write CSV rows here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = "GIFS_DIM_WORKERS", default_value_t = 1)]
    pub workers: usize,
}

#[derive(Args, Debug, Clone)]
pub struct Grid {
    /// Largest perturbation parameter of the dyadic grid.
    #[arg(long, default_value_t = 0.1)]
    pub eps_start: f64,
    /// Number of grid points `eps_start * 2^-j`.
    #[arg(long, default_value_t = 11)]
    pub eps_levels: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialKind {
    /// `s log |M_e|`
    Upper,
    /// `s log |M_e|_i`
    Lower,
    /// `s log |det M_e|`
    Det,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Richardson,
    Polyfit,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load a system and report contraction and separation.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Word length of the image boxes used for separation.
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Pressure of a geometric potential, by spectral radius and cylinder sums.
    Pressure {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = PotentialKind::Upper)]
        potential: PotentialKind,
        /// Multiplier of the potential.
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        /// Longest word length for cylinder sums.
        #[arg(long, default_value_t = 8)]
        cylinder: usize,
    },
    /// Upper, lower and determinant dimension brackets.
    DimBounds {
        #[command(flatten)]
        common: Common,
    },
    /// Dimension brackets over an eps grid and the fitted expansion.
    Perturb {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
        /// Expansion order; defaults to the family's order.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, value_enum, default_value_t = Method::Richardson)]
        method: Method,
        /// Exponent of the affine admissibility check.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Chaos-game sample and box-counting dimension.
    Boxcount {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        points: usize,
        #[arg(long, default_value_t = 64)]
        burn_in: usize,
        /// Number of dyadic box sizes.
        #[arg(long, default_value_t = 8)]
        levels: usize,
        /// Also write the point cloud as CSV (coordinates, vertex).
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// The three-dimensional rotation-block family.
    ExampleR3 {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value_t = 0.4)]
        r: f64,
        /// Write the family as a system description file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<Report, CliError> {
    match cli.command {
        Command::Validate { common, depth } => commands::validate(&common, depth),
        Command::Pressure {
            common,
            potential,
            s,
            cylinder,
        } => commands::pressure(&common, potential, s, cylinder),
        Command::DimBounds { common } => commands::dim_bounds(&common),
        Command::Perturb {
            common,
            grid,
            order,
            method,
            t,
        } => commands::perturb(&common, &grid, order, method, t),
        Command::Boxcount {
            common,
            seed,
            points,
            burn_in,
            levels,
            dump,
        } => commands::boxcount(&common, seed, points, burn_in, levels, dump.as_deref()),
        Command::ExampleR3 { common, grid, r, dump } => commands::example_r3(&common, &grid, r, dump.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.command {
        Command::Validate { common, .. }
        | Command::Pressure { common, .. }
        | Command::DimBounds { common }
        | Command::Perturb { common, .. }
        | Command::Boxcount { common, .. }
        | Command::ExampleR3 { common, .. } => common.out.clone(),
    };
    match run(cli) {
        Ok(report) => match report.emit(out.as_deref()) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
