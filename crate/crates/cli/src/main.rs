use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

/// Checks of G2 structure identities, invariant examples and warped products.
#[derive(Debug, Parser)]
#[command(name = "g2lab", version)]
struct Cli {
    /// Relative tolerance for floating-point residuals.
    #[arg(long, global = true, env = "G2LAB_TOL", default_value_t = g2lab::report::DEFAULT_TOLERANCE, value_parser = parse_tolerance)]
    tol: f64,

    /// Print structured JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the algebraic identity and projector suites.
    Identities {
        /// Use rational arithmetic; every residual must then be zero.
        #[arg(long)]
        exact: bool,
        /// Corrupt one identity, to exercise the failure path.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Analyze a left-invariant structure described in a spec file.
    Analyze {
        path: PathBuf,
        #[arg(long)]
        exact: bool,
        /// Also write the JSON report to this file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Torsion of a warped product over a nearly Kähler fiber.
    Warp(WarpArgs),
    /// Sweep warped and cohomogeneity-one samples for torsion classes.
    Sweep {
        /// JSON sweep configuration; the built-in grid when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Decompose an algebraic curvature tensor into its five blocks.
    Curvature(CurvatureArgs),
}

#[derive(Debug, Args)]
struct WarpArgs {
    /// Warping function: sin, cos, exp, sinh, cosh, id, const, a number, or k*name.
    #[arg(long)]
    f: String,
    /// Phase function, same syntax as --f.
    #[arg(long)]
    theta: String,
    /// Fiber constant: 1 for the six-sphere, 0 for a Calabi–Yau fiber.
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Sample points.
    #[arg(long, num_args = 1.., required = true)]
    t: Vec<f64>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct CurvatureArgs {
    /// A random algebraic curvature tensor from this seed.
    #[arg(long)]
    seed: Option<u64>,
    /// The nearly parallel tensor with this τ₀, built on a random W77 block.
    #[arg(long, allow_hyphen_values = true)]
    nearly_parallel: Option<f64>,
    /// The Riemann tensor of the invariant metric in a spec file.
    #[arg(long)]
    spec: Option<PathBuf>,
}

fn parse_tolerance(text: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(x) if x.is_finite() && x >= 0.0 => Ok(x),
        _ => Err(format!("{text:?} is not a non-negative number")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = commands::Output { json: cli.json, tol: cli.tol };
    let result = match cli.command {
        Command::Identities { exact, inject_fault } => commands::identities(&out, exact, inject_fault),
        Command::Analyze { path, exact, output } => commands::analyze(&out, &path, exact, output.as_deref()),
        Command::Warp(a) => commands::warp(&out, &a.f, &a.theta, a.sigma, &a.t),
        Command::Sweep { config } => commands::sweep(&out, config.as_deref()),
        Command::Curvature(a) => {
            let source = match (a.seed, a.nearly_parallel, a.spec) {
                (Some(seed), _, _) => commands::CurvatureSource::Random(seed),
                (_, Some(tau0), _) => commands::CurvatureSource::NearlyParallel(tau0),
                (_, _, Some(path)) => commands::CurvatureSource::Spec(path),
                _ => unreachable!("clap enforces one source"),
            };
            commands::curvature(&out, source)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
