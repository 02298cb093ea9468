//! `hurwitz` command-line tool.

mod commands;
mod config;
mod report;

use std::process::ExitCode;

use clap::Parser;
use log::error;

use config::{Cli, CommandConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] hurwitz::Error),
    #[error("{0}")]
    Usage(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_budget() => 3,
            CliError::Budget(_) => 3,
            CliError::Core(_) | CliError::Usage(_) => 2,
            CliError::Io(_) | CliError::Json(_) | CliError::Csv(_) => 1,
        }
    }
}

/// Exit codes: 0 success, 1 failed check or I/O error, 2 validation
/// error, 3 budget exceeded.
fn run() -> Result<u8, CliError> {
    let cli = Cli::parse();
    let cfg = CommandConfig::resolve(cli.command, cli.flags)?;
    let report = commands::run(&cfg)?;
    report::emit_report(&report, &cfg, cfg.output.as_deref())?;
    if let Some(why) = &report.budget_exceeded {
        error!("budget exceeded: {why}");
        return Ok(3);
    }
    Ok(if report.passed { 0 } else { 1 })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            error!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
