//! Command-line front end for `spaceform-core`.
//!
//! Every subcommand prints a JSON [`RunReport`] to stdout. Exit codes: 0 when
//! all checks pass, 1 on invalid input, 2 when a mathematical check fails.

pub mod commands;
pub mod error;
pub mod input;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use spaceform_core::{tolerance, CurvatureDefinition};

pub use error::CliError;
pub use input::{Coords, PolygonFile};
pub use report::{Check, RunReport};

/// Environment variable overriding the default check tolerance.
pub const TOLERANCE_ENV: &str = "SPACEFORM_TOL";

#[derive(Debug, Parser)]
#[command(name = "spaceform", version, about = "Convex polygons in the constant-curvature planes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Definition {
    Ta,
    Flat,
}

impl From<Definition> for CurvatureDefinition {
    fn from(d: Definition) -> Self {
        match d {
            Definition::Ta => CurvatureDefinition::Ta,
            Definition::Flat => CurvatureDefinition::Flat,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Side lengths, angles and vertex curvatures.
    Analyze { file: PathBuf },
    /// Smallest enclosing disk.
    Circumradius {
        file: PathBuf,
        /// Also run the brute-force solver and report the difference.
        #[arg(long)]
        oracle: bool,
    },
    /// Check the circumradius bound.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "ta")]
        definition: Definition,
        /// Half-side parameter for the flat bound (required when lambda != 0).
        #[arg(long)]
        frak_e: Option<f64>,
    },
    /// Emit a regular polygon inscribed in a circle of the given radius.
    Regular {
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the digon attaining equality in the bound for `kappa0`.
    Digon {
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long)]
        kappa0: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Curvature of regular n-gons as n doubles from 4 up to `n_max`.
    Convergence {
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        n_max: usize,
    },
    /// Build the smoothed curve and write its samples as CSV.
    Smooth {
        file: PathBuf,
        /// Defaults to the polygon's minimum vertex curvature.
        #[arg(long)]
        kappa0: Option<f64>,
        #[arg(long)]
        epsilon: f64,
        /// Samples per connector.
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Connector blow-up table over decreasing epsilons.
    Sweep {
        file: PathBuf,
        #[arg(long)]
        kappa0: Option<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        epsilons: Vec<f64>,
    },
    /// Check the bound on seeded random polygons.
    Fuzz {
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "ta")]
        definition: Definition,
        /// Outer radius of the random vertices.
        #[arg(long)]
        r_max: Option<f64>,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let echo = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let result = tolerance_from_env().and_then(|tol| commands::dispatch(cli.command, echo, tol));
    match result {
        Ok(report) => {
            let code = if report.passed() { 0 } else { 2 };
            let stdout = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            Outcome { code, stdout, stderr: String::new() }
        }
        Err(e) => {
            let body = serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            Outcome {
                code: e.exit_code(),
                stdout: String::new(),
                stderr: serde_json::to_string_pretty(&body).expect("error serializes") + "\n",
            }
        }
    }
}

fn tolerance_from_env() -> Result<f64, CliError> {
    match std::env::var(TOLERANCE_ENV) {
        Err(_) => Ok(tolerance::CHECK),
        Ok(raw) => match raw.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
            _ => Err(CliError::Input(format!("{TOLERANCE_ENV} must be a positive number, got {raw:?}"))),
        },
    }
}
