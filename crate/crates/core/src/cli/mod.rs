//! Command-line sweep driver.
//!
//! A sweep evaluates one modulation over one channel on an E_b/N₀ grid and
//! emits one row per (grid point, source). Sources are the closed forms
//! (`theory`), quadrature averages (`oracle`) and Monte Carlo (`sim`).
//! Configuration comes from an optional JSON file overridden by flags.

mod output;
mod plot;
mod rows;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::channel::ChannelKind;
use crate::constellation::Scheme;
use crate::error::Error;
use crate::montecarlo::StoppingRule;

pub use output::{read_json, to_csv, to_json, Row, CSV_HEADER};
pub use plot::to_svg;
pub use rows::evaluate_rows;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
    pub const NON_CONVERGENCE: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("numeric: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Io(_) => exit::IO,
            CliError::Numeric(_) => exit::NON_CONVERGENCE,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(msg) => CliError::Usage(msg),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Modulation {
    Bpsk,
    Pam4,
    Qpsk,
    Qam16,
    Qam64,
}

impl Modulation {
    pub fn scheme(self) -> Scheme {
        match self {
            Modulation::Bpsk => Scheme::Bpsk,
            Modulation::Pam4 => Scheme::Pam(4),
            Modulation::Qpsk => Scheme::Qam(4),
            Modulation::Qam16 => Scheme::Qam(16),
            Modulation::Qam64 => Scheme::Qam(64),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Modulation::Bpsk => "bpsk",
            Modulation::Pam4 => "pam4",
            Modulation::Qpsk => "qpsk",
            Modulation::Qam16 => "qam16",
            Modulation::Qam64 => "qam64",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Awgn,
    Rayleigh,
}

impl Channel {
    pub fn kind(self) -> ChannelKind {
        match self {
            Channel::Awgn => ChannelKind::Awgn,
            Channel::Rayleigh => ChannelKind::Rayleigh,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Theory,
    Oracle,
    Sim,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Theory => "theory",
            Source::Oracle => "oracle",
            Source::Sim => "sim",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Inclusive E_b/N₀ range in dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DbRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl DbRange {
    /// Parses `start:step:stop`.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("--ebn0 expects start:step:stop, got '{text}'"));
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
        Ok(Self {
            start: num(parts[0])?,
            step: num(parts[1])?,
            stop: num(parts[2])?,
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) {
            return Err(CliError::Usage("--ebn0 bounds and step must be finite".into()));
        }
        if !(self.step > 0.0) {
            return Err(CliError::Usage(format!("--ebn0 step must be > 0, got {}", self.step)));
        }
        if self.start > self.stop {
            return Err(CliError::Usage(format!(
                "--ebn0 start {} exceeds stop {}",
                self.start, self.stop
            )));
        }
        if (self.stop - self.start) / self.step > 100_000.0 {
            return Err(CliError::Usage("--ebn0 grid has more than 100000 points".into()));
        }
        Ok(())
    }

    /// Grid values, snapped to 1e-9 dB so `0:0.1:1` gives clean decimals.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n)
            .map(|i| ((self.start + i as f64 * self.step) * 1e9).round() / 1e9)
            .collect()
    }
}

/// A fully resolved sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub modulation: Modulation,
    pub channel: Channel,
    pub ebn0_db: DbRange,
    pub sources: Vec<Source>,
    #[serde(default)]
    pub rule: StoppingRule,
    #[serde(default)]
    pub seed: u64,
    /// `None` writes to stdout.
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub plot: Option<PathBuf>,
    /// Concurrent Monte Carlo batches; results do not depend on it.
    #[serde(default)]
    pub workers: Option<usize>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        self.ebn0_db.validate()?;
        if self.sources.is_empty() {
            return Err(CliError::Usage("--sources must name at least one source".into()));
        }
        self.rule
            .validate()
            .map_err(|e| CliError::Usage(format!("--min-errors/--max-symbols: {e}")))?;
        if self.workers == Some(0) {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        Ok(())
    }
}

/// Raw flags; every field is optional so a config file can fill the gaps.
#[derive(Debug, Clone, Default, Parser)]
#[command(
    name = "berlab",
    version,
    about = "Error-rate sweeps: closed forms, quadrature oracles and Monte Carlo"
)]
pub struct Args {
    /// Modulation
    #[arg(long = "mod", value_enum)]
    pub modulation: Option<Modulation>,
    #[arg(long, value_enum)]
    pub channel: Option<Channel>,
    /// Eb/N0 grid in dB as start:step:stop
    #[arg(long, allow_hyphen_values = true)]
    pub ebn0: Option<String>,
    /// Comma-separated subset of theory,oracle,sim
    #[arg(long, value_enum, value_delimiter = ',')]
    pub sources: Option<Vec<Source>>,
    /// Stop a point after this many symbol errors
    #[arg(long)]
    pub min_errors: Option<u64>,
    /// Symbol budget per point
    #[arg(long)]
    pub max_symbols: Option<u64>,
    /// Symbols per batch
    #[arg(long)]
    pub batch_size: Option<u64>,
    /// Master seed (default 0)
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output file; stdout when absent or "-"
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// SVG plot of BER against Eb/N0
    #[arg(long)]
    pub plot: Option<PathBuf>,
    /// JSON file with SweepConfig fields; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Subset of [`SweepConfig`] accepted from a file; absent fields fall back.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    modulation: Option<Modulation>,
    channel: Option<Channel>,
    ebn0_db: Option<DbRange>,
    sources: Option<Vec<Source>>,
    rule: Option<StoppingRule>,
    seed: Option<u64>,
    output: Option<PathBuf>,
    format: Option<OutputFormat>,
    plot: Option<PathBuf>,
    workers: Option<usize>,
}

fn read_file_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))
}

/// Merges file and flags (flags win), applies defaults and validates.
pub fn validate_config(args: &Args) -> Result<SweepConfig, CliError> {
    let file = match &args.config {
        Some(path) => read_file_config(path)?,
        None => FileConfig::default(),
    };
    let modulation = args
        .modulation
        .or(file.modulation)
        .ok_or_else(|| CliError::Usage("--mod is required".into()))?;
    let channel = args.channel.or(file.channel).unwrap_or(Channel::Awgn);
    let ebn0_db = match &args.ebn0 {
        Some(text) => DbRange::parse(text)?,
        None => file
            .ebn0_db
            .ok_or_else(|| CliError::Usage("--ebn0 is required".into()))?,
    };
    let mut sources = Vec::new();
    for s in args
        .sources
        .clone()
        .or(file.sources)
        .unwrap_or_else(|| vec![Source::Theory])
    {
        if !sources.contains(&s) {
            sources.push(s);
        }
    }
    let base = file.rule.unwrap_or_default();
    let max_symbols = args.max_symbols.unwrap_or(base.max_symbols);
    // an unset batch size shrinks to fit a small budget
    let batch_size = args
        .batch_size
        .or(file.rule.map(|r| r.batch_size))
        .unwrap_or_else(|| base.batch_size.min(max_symbols));
    let rule = StoppingRule {
        min_symbol_errors: args.min_errors.unwrap_or(base.min_symbol_errors),
        max_symbols,
        batch_size,
    };
    let output = args.out.clone().or(file.output).filter(|p| p.as_os_str() != "-");
    let cfg = SweepConfig {
        modulation,
        channel,
        ebn0_db,
        sources,
        rule,
        seed: args.seed.or(file.seed).unwrap_or(0),
        output,
        format: args.format.or(file.format).unwrap_or_default(),
        plot: args.plot.clone().or(file.plot),
        workers: args.workers.or(file.workers),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Evaluates the sweep and writes the table (and plot, if requested).
/// Returns the rows and the rendered table.
pub fn run_sweep(cfg: &SweepConfig) -> Result<(Vec<Row>, String), CliError> {
    cfg.validate()?;
    let rows = evaluate_rows(cfg)?;
    let table = match cfg.format {
        OutputFormat::Csv => to_csv(&rows),
        OutputFormat::Json => to_json(&rows),
    };
    if let Some(path) = &cfg.output {
        write_file(path, &table)?;
    }
    if let Some(path) = &cfg.plot {
        write_file(path, &to_svg(&rows, cfg))?;
    }
    Ok((rows, table))
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args(args: Args) -> i32 {
    let result = validate_config(&args).and_then(|cfg| {
        let (_, table) = run_sweep(&cfg)?;
        if cfg.output.is_none() {
            print!("{table}");
        }
        Ok(())
    });
    match result {
        Ok(()) => exit::OK,
        Err(e) => {
            eprintln!("berlab: {e}");
            e.exit_code()
        }
    }
}
