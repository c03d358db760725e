//! Command-line front end for `relaycap-core`.

pub mod commands;
pub mod config;
mod error;
pub mod format;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use relaycap_core::bounds::{Quantifier, SearchMode};
use relaycap_core::Settings;

pub use config::RunConfig;
pub use error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CommandKind {
    /// Source-cut bound, min cut and per-cut table.
    Bound,
    /// Optimized quantization, compress-forward rate and binding constraints.
    Cfrate,
    /// Convergence sweep over relay power scales, as CSV.
    Sweep,
    /// Built-in invariant suites.
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum QuantifierArg {
    Forall,
    Exists,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Uniform,
    Coordinate,
}

#[derive(Debug, Parser)]
#[command(
    name = "relaycap",
    version,
    about = "Capacity bounds and compress-forward rates for Gaussian relay networks"
)]
pub struct Cli {
    pub command: CommandKind,
    /// JSON configuration; optional for `verify`.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub quantifier: Option<QuantifierArg>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Write the report or CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Allow exhaustive enumeration beyond the node limit.
    #[arg(long)]
    pub override_guard: bool,
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

impl Cli {
    fn load_config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match (&self.config, self.command) {
            (Some(path), _) => RunConfig::load(path)?,
            (None, CommandKind::Verify) => RunConfig::default(),
            (None, _) => return Err(CliError::Config("--config is required".into())),
        };
        if let Some(q) = self.quantifier {
            cfg.cf.quantifier = match q {
                QuantifierArg::Forall => Quantifier::ForAll,
                QuantifierArg::Exists => Quantifier::Exists,
            };
        }
        if let Some(m) = self.mode {
            cfg.cf.mode = match m {
                ModeArg::Uniform => SearchMode::UniformBisection,
                ModeArg::Coordinate => SearchMode::CoordinateDescent,
            };
        }
        cfg.verify.inject_fault = self.inject_fault;
        Ok(cfg)
    }

    fn emit(&self, bytes: &[u8]) -> Result<(), CliError> {
        match &self.out {
            Some(path) => fs::write(path, bytes)?,
            None => io::stdout().lock().write_all(bytes)?,
        }
        Ok(())
    }

    /// Runs the command; a verification failure still emits the report.
    pub fn execute(&self) -> Result<(), CliError> {
        let cfg = self.load_config()?;
        let settings = Settings::default().with_override(self.override_guard);
        match self.command {
            CommandKind::Bound => self.emit(commands::cmd_bound(&cfg, &settings)?.as_bytes()),
            CommandKind::Cfrate => self.emit(commands::cmd_cfrate(&cfg, &settings)?.as_bytes()),
            CommandKind::Sweep => self.emit(&commands::cmd_sweep(&cfg, &settings)?),
            CommandKind::Verify => {
                let (text, passed) = commands::cmd_verify(&cfg, &settings)?;
                self.emit(text.as_bytes())?;
                if passed {
                    Ok(())
                } else {
                    Err(CliError::Verification("one or more checks failed".into()))
                }
            }
        }
    }
}

/// Parses arguments, runs, reports errors on stderr and maps them to exit
/// codes. Argument errors exit with 2.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match cli.execute() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.to_exit()
        }
    }
}
