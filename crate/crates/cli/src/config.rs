//! Command-line flags, JSON config files, and their merge.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "HURWITZ_WORKERS";

pub const DEFAULT_ORBIT_CAP: usize = 5_000_000;
pub const DEFAULT_SEARCH_CAP: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 2024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// List Nielsen class representatives.
    Enumerate,
    /// Braid orbits with sizes, seeds and cusp widths.
    Orbits,
    /// sh-incidence matrix of a reduced class with r = 4.
    Shinc,
    /// Ramification indices, genus and moduli flags per component.
    Genus,
    /// Lift invariants against a central extension.
    Lift,
    /// Modular Tower levels, component tree and cusp data.
    Tower,
    /// Branch cycle lemma data for the class vector.
    Bcl,
    /// Property suites with zero-violation reporting.
    Check,
}

#[derive(Debug, Parser)]
#[command(name = "hurwitz", version, about = "Nielsen classes, braid orbits and Modular Tower levels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

/// Every option, shared by all subcommands. Unset fields fall back to the
/// config file and then to defaults.
#[derive(Clone, Debug, Default, clap::Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Flags {
    /// Group descriptor, e.g. A4, D5, SL2(3), V(2,5):M=[[0,-1],[1,-1]].
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Class vector, e.g. [3a,3a,3b,3b] or [3ax2,3bx2].
    #[arg(long, global = true)]
    pub classes: Option<String>,
    /// raw, inner, absolute, inner-reduced or abs-reduced.
    #[arg(long, global = true)]
    pub mode: Option<String>,
    /// spin4, spin5, heis(l), heis(l,i) or hom:<file>.
    #[arg(long, global = true)]
    pub cover: Option<String>,
    /// The prime l.
    #[arg(long, global = true)]
    pub ell: Option<u32>,
    /// Rank t of the lattice in the vector family.
    #[arg(long, global = true)]
    pub rank: Option<usize>,
    /// Complement action matrix for the vector family.
    #[arg(long, global = true)]
    pub action: Option<String>,
    /// Highest tower level.
    #[arg(long, global = true)]
    pub k_max: Option<usize>,
    /// Tower family: vector, dihedral or sl2.
    #[arg(long, global = true)]
    pub family: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Report path; standard output when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Largest group order built.
    #[arg(long, global = true)]
    pub order_bound: Option<usize>,
    /// Largest Nielsen class size accepted.
    #[arg(long, global = true)]
    pub orbit_cap: Option<usize>,
    /// Largest number of tuples examined by Frattini and HM searches.
    #[arg(long, global = true)]
    pub search_cap: Option<u64>,
    /// Worker threads; 0 uses all cores. Defaults to $HURWITZ_WORKERS.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Seed for sampled property checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Property suite for `check`: braid-relations, lift-constancy,
    /// determinism, projection or all.
    #[arg(long, global = true)]
    pub suite: Option<String>,
    /// Run the eventually-Frattini report in `tower`.
    #[arg(long, global = true)]
    #[serde(default)]
    pub frattini: bool,
    /// JSON config file with the same field names as the flags.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

/// Fully resolved configuration of one run.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct CommandConfig {
    pub command: Command,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub action: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip)]
    pub format: Format,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    pub order_bound: usize,
    pub orbit_cap: usize,
    pub search_cap: u64,
    #[serde(skip)]
    pub workers: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub frattini: bool,
}

fn read_config(path: &Path) -> Result<Flags, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
}

fn env_workers() -> Result<Option<usize>, CliError> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{WORKERS_ENV} must be a nonnegative integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn positive<T: PartialOrd + Default + std::fmt::Display>(name: &str, v: T) -> Result<T, CliError> {
    if v > T::default() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("--{name} must be positive, got {v}")))
    }
}

impl CommandConfig {
    /// Flags override the config file, which overrides defaults.
    pub fn resolve(command: Command, flags: Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => read_config(p)?,
            None => Flags::default(),
        };
        macro_rules! pick {
            ($f:ident) => {
                flags.$f.clone().or(file.$f.clone())
            };
        }
        let workers = match pick!(workers) {
            Some(w) => w,
            None => env_workers()?.unwrap_or(0),
        };
        Ok(CommandConfig {
            command,
            group: pick!(group),
            classes: pick!(classes),
            mode: pick!(mode),
            cover: pick!(cover),
            ell: pick!(ell),
            rank: pick!(rank),
            action: pick!(action),
            k_max: pick!(k_max),
            family: pick!(family),
            format: pick!(format).unwrap_or(Format::Text),
            output: pick!(output),
            order_bound: positive("order-bound", pick!(order_bound).unwrap_or(hurwitz::group::DEFAULT_ORDER_BOUND))?,
            orbit_cap: positive("orbit-cap", pick!(orbit_cap).unwrap_or(DEFAULT_ORBIT_CAP))?,
            search_cap: positive("search-cap", pick!(search_cap).unwrap_or(DEFAULT_SEARCH_CAP))?,
            workers,
            seed: pick!(seed).unwrap_or(DEFAULT_SEED),
            suite: pick!(suite),
            frattini: flags.frattini || file.frattini,
        })
    }

    pub fn require<'a>(&self, name: &str, v: &'a Option<String>) -> Result<&'a str, CliError> {
        v.as_deref().ok_or_else(|| CliError::Usage(format!("`{}` needs --{name}", self.command_name())))
    }

    pub fn command_name(&self) -> &'static str {
        match self.command {
            Command::Enumerate => "enumerate",
            Command::Orbits => "orbits",
            Command::Shinc => "shinc",
            Command::Genus => "genus",
            Command::Lift => "lift",
            Command::Tower => "tower",
            Command::Bcl => "bcl",
            Command::Check => "check",
        }
    }
}
