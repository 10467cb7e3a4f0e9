mod commands;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "wigner-entropy", version, about = "Wigner entropy of single-mode states on a truncated Fock space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct QuadArgs {
    /// Radial cutoff of the phase-space quadrature.
    #[arg(long)]
    pub rmax: Option<f64>,
    /// Gauss-Legendre nodes in the radius.
    #[arg(long)]
    pub radial_nodes: Option<usize>,
    /// Trapezoid nodes in the angle.
    #[arg(long)]
    pub angular_nodes: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Wigner entropy, marginal entropies and the entropic inequalities of a state.
    Entropy {
        /// State as inline JSON or a path to a JSON file.
        #[arg(long)]
        state: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Entropy over the non-negative region of the {|0>, |1>} qubit, as CSV.
    SweepQubit {
        #[arg(long, default_value_t = 20_000)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Gamma-weighted coefficient sums and the k-functional bound.
    CheckCondition1 {
        #[arg(long)]
        state: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// k grid as "start:stop:step" inside [1, 2].
        #[arg(long, default_value = "1:2:0.05")]
        k_grid: String,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Numerical verification suites.
    Verify {
        suite: Suite,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Number of random states for the randomized suites.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// W(q, p) on a square grid, as CSV with a JSON sidecar.
    Grid {
        #[arg(long)]
        state: String,
        #[arg(long)]
        out: PathBuf,
        /// Half-width of the grid.
        #[arg(long, default_value_t = 4.0)]
        extent: f64,
        /// Points per axis.
        #[arg(long, default_value_t = 21)]
        points: usize,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Boundary entropy: closed form, derivative sign, endpoint limits, minimum.
    AppendixA,
    /// Norm bounds of the gamma-normalized monomials.
    AppendixB,
    /// Parity structure forced by the coefficient condition.
    AppendixC,
    /// Random Wigner non-negative states against the vacuum entropy.
    ConjectureScan,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Entropy { state, out, quad } => commands::entropy(&state, out.as_deref(), &quad),
        Command::SweepQubit { n, out, quad } => commands::sweep_qubit(n, &out, &quad),
        Command::CheckCondition1 { state, out, k_grid, quad } => {
            commands::check_condition1(&state, out.as_deref(), &k_grid, &quad)
        }
        Command::Verify { suite, seed, n, out, quad } => verify::run(suite, seed, n, out.as_deref(), &quad),
        Command::Grid { state, out, extent, points } => commands::grid(&state, &out, extent, points),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
