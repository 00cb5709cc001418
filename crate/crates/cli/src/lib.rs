//! Command-line surface over `veronese-core`.
//!
//! Every subcommand renders to a string so the whole driver can be exercised
//! in-process; `main` only prints and exits.

use std::ffi::OsString;
use std::fmt;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod output;

pub use veronese_core as core;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    /// A verification or equality check failed, or a point was rejected.
    pub const CHECK_FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const BUDGET: i32 = 3;
}

/// JSON documents carry this as `schema_version`.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FromStr for FieldSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "rational" {
            return Ok(Self::Rational);
        }
        let p = s
            .strip_prefix("fp:")
            .ok_or_else(|| format!("expected \"rational\" or \"fp:<prime>\", got {s:?}"))?;
        let p: u64 = p.parse().map_err(|_| format!("invalid modulus {p:?}"))?;
        veronese_core::PrimeField::new(p).map_err(|e| e.to_string())?;
        Ok(Self::Prime(p))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rational => f.write_str("rational"),
            Self::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct CliConfig {
    /// Dimension of the source projective space P^n.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Degree of the Veronese map (at least 1).
    #[arg(long, global = true)]
    pub d: Option<u32>,
    /// "rational" or "fp:<prime>".
    #[arg(long, global = true, default_value = "rational")]
    pub field: FieldSpec,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for random test points.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cap on points x generators membership tests for oracle runs.
    #[arg(long, global = true, default_value_t = veronese_core::DEFAULT_BUDGET)]
    pub budget: u128,
}

#[derive(Debug, Parser)]
#[command(
    name = "veronese",
    version,
    about = "Veronese map, its determinantal equations and their checks"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: CliConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Print the matrix in monomial form (L) and coordinate form (M).
    Matrix,
    /// List the distinct 2-minors of M.
    Minors,
    /// Evaluate the Veronese map at a point of P^n.
    Eval { point: String },
    /// Invert the Veronese map at a point of the variety.
    Invert { point: String },
    /// Test whether a point of P^N satisfies every 2-minor.
    Member { point: String },
    /// Run the roundtrip, chart and certificate checks.
    Verify {
        /// Random source points for the roundtrip check.
        #[arg(long, default_value_t = 500)]
        points: usize,
        /// Image points per chart for the numeric rewrite-chain check.
        #[arg(long, default_value_t = 20)]
        chain_points: usize,
        /// Verify this zero-propagation certificate (JSON) instead of a generated one.
        #[arg(long)]
        certificate: Option<std::path::PathBuf>,
        /// Write the generated zero-propagation certificate (JSON) to this file.
        #[arg(long)]
        write_certificate: Option<std::path::PathBuf>,
    },
    /// Exhaustively compare the variety with the Veronese image over F_p.
    Oracle {
        /// Walk the points on one thread.
        #[arg(long)]
        serial: bool,
        /// Skip the comparison against all balanced quadrics.
        #[arg(long)]
        no_toric: bool,
    },
}

/// Rendered result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    pub fn ok(stdout: String) -> Self {
        Self {
            code: exit::SUCCESS,
            stdout,
            stderr: String::new(),
        }
    }

    pub fn with_code(code: i32, stdout: String) -> Self {
        Self {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    pub fn error(code: i32, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Self {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

/// Parse arguments and run.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => commands::execute(&cli.config, &cli.command),
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::SUCCESS
            };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                Outcome::error(code, rendered)
            } else {
                Outcome::ok(rendered)
            }
        }
    }
}
