//! Command-line entry point.
//!
//! Exit codes: 0 on success, 2 on usage errors (bad flags, unknown config
//! keys, unparsable values), 1 when a computation or file operation fails.

mod commands;
pub mod config;
mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{parse_config, Command, Settings};

/// A problem with the invocation rather than the computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

#[derive(Parser, Debug)]
#[command(
    name = "summa",
    version,
    about = "Summatory functions of the Möbius and Liouville functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Flat key=value config file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out_dir: Option<String>,
    /// csv, json or both.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    workers: Option<String>,
    /// Sieve block length.
    #[arg(long, global = true)]
    block_len: Option<String>,
    /// Suppress progress messages on stderr.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Tabulate μ(n) and λ(n) over [lo, n_max].
    Sieve {
        #[arg(long)]
        lo: Option<String>,
        #[arg(long)]
        n_max: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Accumulate M(x) and L(x) with checkpoints and sign events.
    Walk {
        #[arg(long)]
        n_max: Option<String>,
        /// Checkpoint stride.
        #[arg(long)]
        stride: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// One statistical experiment on μ or λ.
    Stats {
        /// mobius or liouville.
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        n_max: Option<String>,
        /// distribution, moments, charfn, covariance, blocks, scaling,
        /// average, envelope or ratio.
        #[arg(long)]
        op: Option<String>,
        /// Comma-separated arguments of the characteristic function.
        #[arg(long)]
        t: Option<String>,
        /// Covariance lag.
        #[arg(long)]
        lag: Option<String>,
        /// Block width for the normality diagnostic.
        #[arg(long)]
        window: Option<String>,
        /// Comma-separated block widths for the scaling experiment.
        #[arg(long)]
        widths: Option<String>,
        /// Envelope shape: log, loglog or sqrt_log.
        #[arg(long)]
        phi: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Truncated Perron integral for M(x) or L(x).
    Perron {
        /// mertens or liouville.
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        x: Option<String>,
        /// Truncation height; a comma-separated list runs a remainder scan.
        #[arg(long = "T")]
        t_max: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// The full reproduction suite with one summary document.
    Report {
        #[arg(long)]
        n_max: Option<String>,
        #[arg(long)]
        stride: Option<String>,
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        window: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

type Flags = Vec<(&'static str, Option<String>)>;

impl Sub {
    fn split(self) -> (Command, Flags, Common) {
        match self {
            Sub::Sieve { lo, n_max, common } => (Command::Sieve, vec![("lo", lo), ("n_max", n_max)], common),
            Sub::Walk { n_max, stride, common } => (Command::Walk, vec![("n_max", n_max), ("stride", stride)], common),
            Sub::Stats {
                kind,
                n_max,
                op,
                t,
                lag,
                window,
                widths,
                phi,
                common,
            } => (
                Command::Stats,
                vec![
                    ("kind", kind),
                    ("n_max", n_max),
                    ("op", op),
                    ("t", t),
                    ("lag", lag),
                    ("window", window),
                    ("widths", widths),
                    ("phi", phi),
                ],
                common,
            ),
            Sub::Perron {
                target,
                x,
                t_max,
                common,
            } => (
                Command::Perron,
                vec![("target", target), ("x", x), ("T", t_max)],
                common,
            ),
            Sub::Report {
                n_max,
                stride,
                phi,
                window,
                common,
            } => (
                Command::Report,
                vec![("n_max", n_max), ("stride", stride), ("phi", phi), ("window", window)],
                common,
            ),
        }
    }
}

enum Failure {
    Usage(UsageError),
    Runtime(crate::Error),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e)
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Runtime(e)
    }
}

/// Runs the tool on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (command, mut flags, common) = cli.command.split();
    flags.extend([
        ("out_dir", common.out_dir.clone()),
        ("format", common.format.clone()),
        ("workers", common.workers.clone()),
        ("block_len", common.block_len.clone()),
    ]);
    match execute(command, &flags, &common) {
        Ok(written) => {
            for path in written {
                println!("{}", path.display());
            }
            0
        }
        Err(Failure::Usage(UsageError(msg))) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn execute(command: Command, flags: &Flags, common: &Common) -> Result<Vec<PathBuf>, Failure> {
    let file = match &common.config {
        None => Vec::new(),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
            parse_config(&text, path)?
        }
    };
    let settings = Settings::resolve(command, &file, flags);
    commands::dispatch(&settings, !common.quiet)
}
