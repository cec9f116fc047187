//! `orlicz-lab`: reproducible experiments on top of `orlicz-core`.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 numerical
//! non-convergence, 4 blow-up of the nonlinear flow.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{DecomposeArgs, NormArgs, SweepArgs, VerifyArgs, WaveArgs};
use orlicz_core::Error;

#[derive(Debug, Parser)]
#[command(
    name = "orlicz-lab",
    version,
    about = "Orlicz-norm, profile-decomposition and Klein-Gordon experiments"
)]
#[command(args_override_self = true)]
struct Cli {
    /// Directory for CSV output; defaults to $ORLICZ_LAB_OUT_DIR, else stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps and paired runs.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// key=value file of subcommand flags (flags on the command line win).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// L2, gradient and Orlicz norms of a named family.
    Norm(NormArgs),
    /// Asymptotic sweeps: parameter, observed, target, converged.
    Sweep(SweepArgs),
    /// Profile decomposition of a synthetic sequence.
    Decompose(DecomposeArgs),
    /// Nonlinear vs linear Klein-Gordon evolution.
    Wave(WaveArgs),
    /// Acceptance checks.
    Verify(VerifyArgs),
}

const SUBCOMMANDS: [&str; 5] = ["norm", "sweep", "decompose", "wave", "verify"];

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) | Error::Precondition(_) => 2,
            Error::BlowUp { .. } => 4,
            _ => 3,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::usage(format!("i/o: {e}"))
    }
}

fn parse_args() -> Result<Cli, Failure> {
    let mut args: Vec<String> = std::env::args().collect();
    if let Some(path) = config::take_config_flag(&mut args).map_err(Failure::usage)? {
        let pairs = config::read_pairs(path.as_ref()).map_err(Failure::usage)?;
        config::splice(&mut args, &pairs, &SUBCOMMANDS).map_err(Failure::usage)?;
    }
    Cli::try_parse_from(args).map_err(|e| {
        let code = if e.use_stderr() { 2 } else { 0 };
        let _ = e.print();
        Failure {
            code,
            message: String::new(),
        }
    })
}

fn run() -> Result<(), Failure> {
    let cli = parse_args()?;
    if cli.jobs == 0 {
        return Err(Failure::usage("--jobs must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| Failure::usage(e.to_string()))?;
    let sink = output::Sink::new(cli.out);
    pool.install(|| match cli.command {
        Command::Norm(a) => commands::norm(&a, &sink),
        Command::Sweep(a) => commands::sweep(&a, &sink),
        Command::Decompose(a) => commands::decompose(&a, &sink),
        Command::Wave(a) => commands::wave(&a, &sink),
        Command::Verify(a) => commands::verify(&a),
    })
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
