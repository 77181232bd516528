//! `qlambert`: evaluate the q-Lambert series, verify the Padé approximants,
//! print the measure tables and run the cyclotomic checks.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 invalid input.

mod cache;
mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qlambert::denomfactory::FactorKind;
use qlambert::Sign;

use crate::output::Format;

/// Precision override in bits, read by `eval` and `verify`.
pub const PRECISION_ENV: &str = "QLAMBERT_PRECISION";

#[derive(Parser, Debug)]
#[command(
    name = "qlambert",
    version,
    about = "Padé approximants and irrationality measures for q-Lambert series"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Directory for cached approximant records.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// Either `--q1 s/t --p2 P` or `--p P --r1 R1 --r2 R2`.
#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    /// q1 as a fraction in (0, 1).
    #[arg(long)]
    pub q1: Option<String>,
    /// q2 = 1/p2.
    #[arg(long)]
    pub p2: Option<String>,
    /// Special base: q1 = p^-r1, q2 = p^-r2.
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub r1: Option<u32>,
    #[arg(long)]
    pub r2: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certified decimal digits of h±(q1, q2).
    Eval {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "minus")]
        sign: Sign,
        #[arg(long, default_value_t = 20)]
        digits: usize,
        /// Working precision in bits (default: from --digits).
        #[arg(long, env = PRECISION_ENV)]
        precision: Option<u64>,
    },
    /// Build and check the approximants for n = 1..nmax.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "minus")]
        sign: Sign,
        #[arg(long, default_value = "general")]
        kind: FactorKind,
        #[arg(long, default_value_t = 10)]
        nmax: usize,
        /// Starting precision in bits (default: the per-n schedule).
        #[arg(long, env = PRECISION_ENV)]
        precision: Option<u64>,
    },
    /// Table 1 (m±) or Table 2 (χ±).
    Tables {
        #[arg(long)]
        which: u8,
    },
    /// Cyclotomic identities and totient sums.
    #[command(subcommand)]
    Cyclo(CycloCommand),
}

#[derive(Subcommand, Debug)]
pub enum CycloCommand {
    /// Lemma A1 for all 1 <= n' <= n, 1 <= r' <= r.
    LemmaA1 {
        #[arg(long, default_value_t = 30)]
        n: u64,
        #[arg(long, default_value_t = 6)]
        r: u64,
    },
    /// Lemma A2 for all 1 <= n' <= n, 1 <= r' <= r and a prime sigma.
    LemmaA2 {
        #[arg(long, default_value_t = 30)]
        n: u64,
        #[arg(long, default_value_t = 6)]
        r: u64,
        #[arg(long, default_value_t = 2)]
        sigma: u64,
    },
    /// Where C_n divides both M_n and the shifted multiple.
    NiceP {
        #[arg(long)]
        p: String,
        #[arg(long)]
        r1: u64,
        #[arg(long)]
        r2: u64,
        #[arg(long, default_value = "minus")]
        sign: Sign,
        #[arg(long, default_value_t = 20)]
        nmax: u64,
    },
    /// (1/N²) Σ φ(·) against its limit.
    TotientSum {
        #[arg(long)]
        variant: qlambert::cyclotomic::TotientVariant,
        #[arg(long, default_value_t = 1)]
        a: u64,
        #[arg(long, default_value_t = 1)]
        b: u64,
        #[arg(long = "N", default_value_t = 1_000_000)]
        big_n: u64,
        /// Largest accepted relative error.
        #[arg(long, default_value_t = 0.02)]
        tolerance: f64,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("verification failed: {0}")]
    Failed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            _ => 1,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cache = cli.cache.map(cache::RecordCache::new);
    let report = match cli.command {
        Command::Eval {
            params,
            sign,
            digits,
            precision,
        } => commands::eval(&params, sign, digits, precision)?,
        Command::Verify {
            params,
            sign,
            kind,
            nmax,
            precision,
        } => commands::verify(&params, sign, kind, nmax, precision, cache.as_ref())?,
        Command::Tables { which } => commands::tables(which)?,
        Command::Cyclo(c) => commands::cyclo(c)?,
    };
    let mut out = std::io::stdout().lock();
    report.write(cli.format, &mut out)?;
    match report.failure {
        Some(msg) => Err(CliError::Failed(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
