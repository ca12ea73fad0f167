//! Command-line and config-file parsing into a validated [`RunConfig`].

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Deserialize;

use hubbard_pair::dataset::Format;
use hubbard_pair::oracle::Tolerances;
use hubbard_pair::sweep::{Execution, Units};
use hubbard_pair::LatticeParams;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Spectrum,
    Scatter,
    Dimer,
    Dos,
    Validate,
    Figure,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Scatter => "scatter",
            Command::Dimer => "dimer",
            Command::Dos => "dos",
            Command::Validate => "validate",
            Command::Figure => "figure",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }
}

/// Two bosons in a 1D Hubbard lattice: scattering continuum, bound dimers
/// and an exact-diagonalization cross-check.
#[derive(Debug, Parser)]
#[command(name = "hubbard-pair", version)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// TOML file with default values; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Tunnel coupling J (> 0).
    #[arg(long = "J", allow_negative_numbers = true)]
    pub j: Option<f64>,
    /// On-site interaction U.
    #[arg(long = "U", allow_negative_numbers = true)]
    pub u: Option<f64>,
    /// Lattice constant d (> 0).
    #[arg(long = "d", allow_negative_numbers = true)]
    pub d: Option<f64>,
    /// Center-of-mass momentum grid size.
    #[arg(long = "K-points")]
    pub k_points: Option<usize>,
    /// Relative momentum (or energy) grid size.
    #[arg(long = "k-points")]
    pub rel_points: Option<usize>,
    /// Half-width of the relative chain used by the oracle.
    #[arg(long = "N")]
    pub half_width: Option<usize>,
    /// Ring size used by the oracle.
    #[arg(long = "M")]
    pub ring_sites: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Output file (a directory for `figure`). Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report energies, momenta and lengths in raw units instead of J and d.
    #[arg(long)]
    pub raw_units: bool,
    /// Write a zero timestamp so repeated runs are byte-identical.
    #[arg(long)]
    pub freeze_timestamp: bool,
    /// Bound-energy tolerance for `validate`, in units of J (shallow dimers get 100x).
    #[arg(long)]
    pub energy_tol: Option<f64>,
    /// Allowed 1 - overlap for `validate`.
    #[arg(long)]
    pub overlap_tol: Option<f64>,
    /// Per-bin DOS histogram tolerance for `validate`.
    #[arg(long)]
    pub dos_tol: Option<f64>,
    /// Run sweeps on the calling thread only.
    #[arg(long)]
    pub sequential: bool,
}

/// Values accepted from a TOML config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(rename = "J")]
    pub j: Option<f64>,
    #[serde(rename = "U")]
    pub u: Option<f64>,
    pub d: Option<f64>,
    #[serde(rename = "K_points")]
    pub k_points: Option<usize>,
    #[serde(rename = "k_points")]
    pub rel_points: Option<usize>,
    #[serde(rename = "N")]
    pub half_width: Option<usize>,
    #[serde(rename = "M")]
    pub ring_sites: Option<usize>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub raw_units: Option<bool>,
    pub freeze_timestamp: Option<bool>,
    pub energy_tol: Option<f64>,
    pub overlap_tol: Option<f64>,
    pub dos_tol: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: LatticeParams,
    /// Whether U was set explicitly (flag or file).
    pub u_given: bool,
    pub k_points: usize,
    pub rel_points: usize,
    pub half_width: usize,
    pub ring_sites: usize,
    pub tolerances: Tolerances,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub units: Units,
    pub freeze_timestamp: bool,
    pub execution: Execution,
}

pub const DEFAULT_K_POINTS: usize = 201;
pub const DEFAULT_REL_POINTS: usize = 101;
pub const DEFAULT_HALF_WIDTH: usize = 200;
pub const DEFAULT_RING_SITES: usize = 24;

/// Shallow-binding energy tolerance relative to the deep-binding one.
const SHALLOW_TOLERANCE_RATIO: f64 = 100.0;

/// Parses `argv` (including the program name) and merges an optional config file.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(CliError::Clap)?;
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    resolve(cli, file)
}

fn positive(name: &str, value: f64) -> Result<f64, CliError> {
    if !value.is_finite() {
        return Err(CliError::Usage(format!("{name} must be finite")));
    }
    if value <= 0.0 {
        return Err(CliError::Usage(format!("{name} must be positive")));
    }
    Ok(value)
}

pub fn resolve(cli: Cli, file: FileConfig) -> Result<RunConfig, CliError> {
    let j = positive("J", cli.j.or(file.j).unwrap_or(1.0))?;
    let d = positive("d", cli.d.or(file.d).unwrap_or(1.0))?;
    let u_value = cli.u.or(file.u);
    let u = u_value.unwrap_or(0.0);
    if !u.is_finite() {
        return Err(CliError::Usage("U must be finite".into()));
    }
    let params = LatticeParams::with_units(j, u, d, 1.0).map_err(|e| CliError::Usage(e.to_string()))?;

    let k_points = cli.k_points.or(file.k_points).unwrap_or(DEFAULT_K_POINTS);
    let rel_points = cli.rel_points.or(file.rel_points).unwrap_or(DEFAULT_REL_POINTS);
    if k_points < 2 {
        return Err(CliError::Usage("--K-points must be at least 2".into()));
    }
    if rel_points < 2 {
        return Err(CliError::Usage("--k-points must be at least 2".into()));
    }
    let half_width = cli.half_width.or(file.half_width).unwrap_or(DEFAULT_HALF_WIDTH);
    if half_width < 1 {
        return Err(CliError::Usage("--N must be at least 1".into()));
    }
    let ring_sites = cli.ring_sites.or(file.ring_sites).unwrap_or(DEFAULT_RING_SITES);
    if ring_sites < 4 {
        return Err(CliError::Usage("--M must be at least 4".into()));
    }

    let mut tolerances = Tolerances::default();
    if let Some(t) = cli.energy_tol.or(file.energy_tol) {
        let t = positive("--energy-tol", t)?;
        tolerances.bound_energy = t;
        tolerances.shallow_bound_energy = t * SHALLOW_TOLERANCE_RATIO;
    }
    if let Some(t) = cli.overlap_tol.or(file.overlap_tol) {
        tolerances.overlap = positive("--overlap-tol", t)?;
    }
    if let Some(t) = cli.dos_tol.or(file.dos_tol) {
        tolerances.dos_bin = positive("--dos-tol", t)?;
    }

    let raw = cli.raw_units || file.raw_units.unwrap_or(false);
    Ok(RunConfig {
        command: cli.command,
        params,
        u_given: u_value.is_some(),
        k_points,
        rel_points,
        half_width,
        ring_sites,
        tolerances,
        format: cli.format.or(file.format).unwrap_or(OutputFormat::Csv).into(),
        out: cli.out.or(file.out),
        units: if raw { Units::Raw } else { Units::Dimensionless },
        freeze_timestamp: cli.freeze_timestamp || file.freeze_timestamp.unwrap_or(false),
        execution: if cli.sequential { Execution::Sequential } else { Execution::default() },
    })
}
