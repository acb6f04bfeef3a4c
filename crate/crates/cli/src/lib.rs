//! The `gcmirror` command line: structure files in, labelled verdicts out.

pub mod commands;
pub mod output;

use clap::{Args, Parser, Subcommand};
use gcmirror::FormatError;
use std::path::PathBuf;
use thiserror::Error;

pub use output::Outcome;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}", located(.path, .source))]
    Parse { path: String, source: FormatError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
}

fn located(path: &str, e: &FormatError) -> String {
    match e.position() {
        Some(_) => format!("{path}:{e}"),
        None => format!("{path}: {e}"),
    }
}

impl CliError {
    pub(crate) fn compute(e: impl std::fmt::Display) -> Self {
        CliError::Compute(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "gcmirror", version, about = "Check semi-flat generalized complex structures and their mirrors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the output to this file (for `mirror`, the mirror structure file).
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Base points for positivity, e.g. `0,0;1,1/2`.
    #[arg(long, global = true, value_name = "POINTS")]
    pub samples: Option<String>,
    /// Also check that the mirror re-parses and that mirroring twice is the identity.
    #[arg(long, global = true)]
    pub roundtrip: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the defining equations (K1-K6, e:1-e:7, Kahler conditions).
    Validate { file: PathBuf },
    /// Write the mirror structure file.
    Mirror { file: PathBuf },
    /// Courant brackets of the flat frame images, against the Courant-Nijenhuis tensor.
    Integrability { file: PathBuf },
    /// Pure spinor lines and their exchange under the Fourier-Mukai transform.
    Spinor { file: PathBuf },
    /// Fourier-Mukai transform of a form string.
    Fourier(FourierArgs),
    /// Generalized Kahler checks: positivity, K maps, Buscher rules, mirror.
    Kahler { file: PathBuf },
    /// Brane conditions before and after the mirror map.
    Brane { file: PathBuf },
    /// The Dirac structures J(V) and J(V^*).
    Dirac { file: PathBuf },
}

#[derive(Debug, Args)]
pub struct FourierArgs {
    /// The form, e.g. `exp((1 + i*x)*dth^dx)`.
    pub form: String,
    /// Base coordinate names, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "x")]
    pub base: Vec<String>,
    /// Fiber coordinate names of the torus transform, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "th")]
    pub fiber: Vec<String>,
    /// Names of the dual fiber coordinates; defaults to `<fiber>_hat`.
    #[arg(long, value_delimiter = ',')]
    pub dual: Option<Vec<String>>,
    /// Use the vector-bundle transform of this rank (generators `e_k`, `f_k`, `dx_i`).
    #[arg(long, value_name = "RANK")]
    pub bundle: Option<usize>,
}

/// Runs the command and writes its output; returns whether every check passed.
pub fn run(cli: &Cli) -> Result<bool, CliError> {
    let out = commands::execute(&cli.command, &cli.flags)?;
    let write = |path: &PathBuf, text: &str| {
        std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
    };
    let rendered = if cli.flags.json { out.outcome.to_json() } else { out.outcome.to_text() };
    match (&out.file, &cli.flags.out) {
        (Some(file), Some(path)) => {
            write(path, file)?;
            print!("{rendered}");
        }
        (Some(file), None) if !cli.flags.json && !cli.flags.roundtrip => print!("{file}"),
        (_, Some(path)) if out.file.is_none() => write(path, &rendered)?,
        _ => print!("{rendered}"),
    }
    Ok(out.outcome.pass)
}
