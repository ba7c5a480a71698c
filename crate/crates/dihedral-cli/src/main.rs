//! `dihedral` — reproducible command-line runs over the pattern toolkit.
//!
//! Five subcommands mirror the library modules: `match` (amplitude
//! matching systems), `continuum solve` (the `N → ∞` integral equation),
//! `verify radii` (rigorous certification), `profile synth` (pattern
//! grids and heatmaps), and `galerkin solve`/`continue` (radial
//! Swift–Hohenberg states and branches). Every run writes its artifacts
//! plus a `manifest.json` echoing the resolved parameters.
//!
//! Exit codes: 0 success, 1 usage error, 2 solver failure, 3 verification
//! failure.

mod emit;
mod run;

use clap::{ArgGroup, Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Failure classes, each mapped to a distinct exit code.
pub enum Failure {
    Usage(String),
    Solver(String),
    Verification(String),
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Solver(_) => 2,
            Failure::Verification(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Solver(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<dihedral::Error> for Failure {
    fn from(e: dihedral::Error) -> Self {
        use dihedral::Error::*;
        match e {
            NoConvergence { .. }
            | SingularJacobian { .. }
            | StepUnderflow { .. }
            | InitialPointNotConverged { .. }
            | NegativeSqrt
            | DivisionByIntervalContainingZero => Failure::Solver(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

#[derive(Clone, Copy)]
pub enum MatchMode {
    ClosedForm,
    Enumerate,
}

#[derive(Clone, Copy)]
pub enum GalerkinAction {
    Solve,
    Continue,
}

#[derive(Parser)]
#[command(
    name = "dihedral",
    version,
    about = "Localised dihedral patterns near a Turing instability",
    propagate_version = true
)]
struct Cli {
    /// Cap the worker pool at this many threads
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the amplitude matching system a = Q(a)
    #[command(group = ArgGroup::new("mode").required(true).args(["closed_form", "enumerate"]))]
    Match {
        /// Dihedral symmetry order of the pattern
        #[arg(long)]
        m: u32,

        /// Mode truncation: amplitudes a_0..a_N
        #[arg(long = "N")]
        n: usize,

        /// Use the closed-form families (N <= 3; N = 4 needs 6 | m)
        #[arg(long)]
        closed_form: bool,

        /// Multi-start Newton enumeration, closed under the symmetry group
        #[arg(long)]
        enumerate: bool,

        /// Random Newton starts for --enumerate
        #[arg(long, default_value_t = 64)]
        starts: usize,

        /// RNG seed for --enumerate
        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Convergence tolerance on the max-norm residual
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,

        #[arg(long, default_value = "out")]
        out: PathBuf,
    },

    /// The N -> infinity limit of the matching system (6 | m)
    Continuum {
        #[command(subcommand)]
        action: ContinuumCmd,
    },

    /// Rigorous a-posteriori certification of the continuum profile
    Verify {
        #[command(subcommand)]
        action: VerifyCmd,
    },

    /// Leading-order planar pattern synthesis
    Profile {
        #[command(subcommand)]
        action: ProfileCmd,
    },

    /// Radial Galerkin solver for the quadratic-cubic Swift-Hohenberg equation
    Galerkin {
        #[command(subcommand)]
        action: GalerkinCmd,
    },
}

#[derive(Subcommand)]
enum ContinuumCmd {
    /// Solve the continuum matching equation on a uniform spline mesh
    Solve {
        /// Number of spline segments on [0, 1]
        #[arg(long)]
        mesh: usize,

        /// Newton tolerance on the collocation residual
        #[arg(long, default_value_t = 1e-11)]
        tol: f64,

        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Certify a ball of radius r around the computed profile
    Radii {
        /// Contraction margin in the radii polynomials
        #[arg(long)]
        omega: f64,

        /// Number of spline segments on [0, 1]
        #[arg(long)]
        mesh: usize,

        /// Candidate radius to certify
        #[arg(long)]
        r: f64,

        /// Newton tolerance for the approximate solution
        #[arg(long, default_value_t = 1e-11)]
        tol: f64,

        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ProfileCmd {
    /// Synthesize a pattern grid from a closed-form matching solution
    Synth {
        /// Dihedral symmetry order
        #[arg(long)]
        m: u32,

        /// Mode truncation of the matching solution
        #[arg(long = "N")]
        n: usize,

        /// Which closed-form solution to plot (H1, H2, ...)
        #[arg(long, default_value = "H1")]
        solution: String,

        /// Quadratic coefficient of the model
        #[arg(long, default_value_t = 1.6)]
        gamma: f64,

        /// Distance from onset
        #[arg(long, default_value_t = 0.1)]
        mu: f64,

        /// Radius of the plotted disc
        #[arg(long, default_value_t = 20.0)]
        radius: f64,

        /// Radial grid nodes
        #[arg(long, default_value_t = 201)]
        nr: usize,

        /// Angular grid nodes
        #[arg(long, default_value_t = 256)]
        ntheta: usize,

        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum GalerkinCmd {
    /// Newton-solve the configured localised state
    Solve(GalerkinArgs),

    /// Solve, then trace the solution branch in mu by secant continuation
    Continue(GalerkinArgs),
}

#[derive(Args)]
struct GalerkinArgs {
    /// TOML run configuration; keys m, N, r_star, T, mu0, gamma,
    /// solution_id, steps, step_size
    #[arg(long)]
    config: PathBuf,

    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Match {
            m,
            n,
            closed_form: _,
            enumerate,
            starts,
            seed,
            tol,
            out,
        } => {
            let mode = if enumerate { MatchMode::Enumerate } else { MatchMode::ClosedForm };
            run::cmd_match(m, n, mode, starts, seed, tol, &out)
        }
        Command::Continuum { action: ContinuumCmd::Solve { mesh, tol, out } } => {
            run::cmd_continuum(mesh, tol, &out)
        }
        Command::Verify { action: VerifyCmd::Radii { omega, mesh, r, tol, out } } => {
            run::cmd_verify(omega, mesh, r, tol, &out)
        }
        Command::Profile {
            action:
                ProfileCmd::Synth { m, n, solution, gamma, mu, radius, nr, ntheta, out },
        } => run::cmd_profile(m, n, &solution, gamma, mu, radius, nr, ntheta, &out),
        Command::Galerkin { action } => {
            let (kind, args) = match action {
                GalerkinCmd::Solve(a) => (GalerkinAction::Solve, a),
                GalerkinCmd::Continue(a) => (GalerkinAction::Continue, a),
            };
            run::cmd_galerkin(kind, &args.config, &args.out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here as well; they are not errors
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    if let Some(threads) = cli.threads {
        if let Err(e) = dihedral::configure_threads(threads) {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }

    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
