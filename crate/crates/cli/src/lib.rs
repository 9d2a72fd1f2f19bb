//! `qil`: classify matrices as n-quasi-m-isometries, decompose them, and run
//! the theorem checks.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

pub mod commands;
pub mod document;
pub mod report;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use qil_core::tolerance::EPS_ENV;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "qil", version, about = "n-quasi-m-isometry toolkit")]
pub struct Cli {
    /// Relative acceptance tolerance for normalized residuals.
    #[arg(long, global = true, env = EPS_ENV, default_value_t = 1e-9)]
    pub eps_rel: f64,
    /// Output format; `json` emits one versioned report.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized instances.
    #[arg(long, global = true, default_value_t = qil_core::random::DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Staircase, strict pairs and residual table of each input matrix.
    Classify {
        /// Matrix document file; standard input when absent or `-`.
        input: Option<PathBuf>,
        /// Largest m in the residual table.
        #[arg(long, default_value_t = 5)]
        m_max: usize,
        /// Largest n in the residual table.
        #[arg(long, default_value_t = 3)]
        n_max: usize,
    },
    /// Block decomposition on R(T^n) + N(T*^n) with block and spectral checks.
    Decompose {
        /// Matrix document file; standard input when absent or `-`.
        input: Option<PathBuf>,
        /// Power n of the split.
        #[arg(short, long, default_value_t = 1)]
        n: usize,
        /// Order m checked on the range block.
        #[arg(short, long, default_value_t = 1)]
        m: usize,
    },
    /// Theorem checks: `all`, `catalog` or a theorem id.
    Verify {
        /// Theorem id, `all` or `catalog`.
        theorem: String,
        /// Run the scenario tied to this catalog example instead of random
        /// instances.
        #[arg(long)]
        catalog: Option<String>,
        /// Power used by the catalog scenario.
        #[arg(long)]
        k: Option<usize>,
        /// Random instances per theorem.
        #[arg(long, default_value_t = qil_core::theorems::DEFAULT_BATCH)]
        count: usize,
    },
    /// Print the matrix documents of a catalog example.
    Example {
        /// Catalog id, or `list`.
        id: String,
        /// Truncation size for shift examples.
        #[arg(long)]
        dim: Option<usize>,
    },
}

/// Parses `args`, runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match commands::dispatch(&cli, stdin, out, err) {
        Ok(code) => code,
        // The reader went away, e.g. `qil ... | head`.
        Err(e) if is_broken_pipe(&e) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<std::io::Error>()
            .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
    })
}
