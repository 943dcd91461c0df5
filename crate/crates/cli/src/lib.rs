//! Command-line front end. [`run`] parses arguments, resolves the
//! configuration and dispatches; it returns the process exit status:
//! 0 success, 1 verification failure, 2 configuration error.

pub mod args;
pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use pdm_core::CorrectionSign;

use args::{Cli, Command, SignArg};
use config::{ConfigError, FileConfig, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    File(#[from] ConfigError),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] pdm_core::Error),
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli) {
        Ok(outcome) => {
            if out.write_all(outcome.text.as_bytes()).is_err() {
                return EXIT_CONFIG;
            }
            if outcome.passed {
                EXIT_OK
            } else {
                let _ = writeln!(err, "pdm: verification failed");
                EXIT_VERIFY_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "pdm: error: {e}");
            EXIT_CONFIG
        }
    }
}

fn execute(cli: Cli) -> Result<commands::Outcome, CliError> {
    let o = &cli.overrides;
    let mut file = match &o.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    file.apply(o);
    let sign = match o.correction_sign.unwrap_or_default() {
        SignArg::Plus => CorrectionSign::Plus,
        SignArg::Minus => CorrectionSign::Minus,
    };
    let cfg = RunConfig::resolve(file, sign)?;
    match cli.command {
        Command::Spectrum => commands::spectrum(&cfg),
        Command::Wavefunction { n, coordinate, samples, from, to } => {
            commands::wavefunction(&cfg, n, coordinate, samples, (from, to))
        }
        Command::Verify { resolutions } => commands::verify(&cfg, resolutions),
        Command::Audit { stray_q, samples } => commands::audit_cmd(&cfg, stray_q, samples),
        Command::Sweep { param, values, verify } => commands::sweep(&cfg, &param, &values, verify),
    }
}
