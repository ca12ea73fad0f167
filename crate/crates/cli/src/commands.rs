use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;

use hubbard_pair::dataset::{timestamp, write_atomic, Metadata, SpectrumDataset, Table, SPECTRUM_COLUMNS};
use hubbard_pair::dimer::{dimer_effective_mass, effective_pair_hopping};
use hubbard_pair::model::single_particle_effective_mass;
use hubbard_pair::oracle::{self, OracleReport, ValidationPlan};
use hubbard_pair::sweep::{self, DIMER_COLUMNS, DOS_COLUMNS, SCATTER_COLUMNS, WAVEFUNCTION_COLUMNS};
use hubbard_pair::{LatticeParams, QuasiMomentum};

use crate::config::{Command, RunConfig};
use crate::error::CliError;

/// Interaction magnitude of the figure datasets when `--U` is not given, in units of J.
pub const FIGURE_INTERACTION: f64 = 5.0;

/// Relative sites `|i| <=` this are written for each wavefunction panel.
pub const FIGURE_PANEL_HALF_WIDTH: i64 = 10;

pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    match config.command {
        Command::Spectrum => {
            let table = run_spectrum_sweep(config)?.to_table();
            emit(config, &table, stdout)
        }
        Command::Scatter => emit(config, &scatter_table(config)?, stdout),
        Command::Dimer => emit(config, &dimer_table(config)?, stdout),
        Command::Dos => emit(config, &dos_table(config, &config.params)?, stdout),
        Command::Figure => {
            for path in emit_figure_data(config)? {
                writeln!(stdout, "{}", path.display()).map_err(stdout_err)?;
            }
            Ok(())
        }
        Command::Validate => {
            let (reports, verdict) = run_validation(config)?;
            for r in &reports {
                let status = if r.pass { "PASS" } else { "FAIL" };
                let detail = r.first_failure().unwrap_or_else(|| r.notes.join("; "));
                writeln!(stdout, "{status} {} {detail}", r.parameter_point).map_err(stdout_err)?;
            }
            if let Some(path) = &config.out {
                let text = serde_json::to_string_pretty(&reports).map_err(|e| CliError::Io(e.to_string()))?;
                write_atomic(path, &(text + "\n"))?;
            }
            verdict
        }
    }
}

fn stdout_err(e: std::io::Error) -> CliError {
    CliError::Io(format!("stdout: {e}"))
}

fn emit(config: &RunConfig, table: &Table, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &config.out {
        Some(path) => Ok(table.write(config.format, path)?),
        None => stdout.write_all(table.render(config.format)?.as_bytes()).map_err(stdout_err),
    }
}

fn metadata(config: &RunConfig, params: &LatticeParams, columns: &[&str]) -> Metadata {
    Metadata::new(config.command.name(), *params, config.units, timestamp(config.freeze_timestamp), columns)
}

fn spectrum_dataset(config: &RunConfig, params: &LatticeParams) -> Result<SpectrumDataset, CliError> {
    let rows = sweep::spectrum_rows(params, config.k_points, config.units, config.execution)?;
    let dataset = SpectrumDataset { metadata: metadata(config, params, &SPECTRUM_COLUMNS), rows };
    dataset.validate()?;
    Ok(dataset)
}

/// Band edges and dimer dispersion over the zone.
pub fn run_spectrum_sweep(config: &RunConfig) -> Result<SpectrumDataset, CliError> {
    spectrum_dataset(config, &config.params)
}

fn scatter_table(config: &RunConfig) -> Result<Table, CliError> {
    let p = &config.params;
    let rows = sweep::scatter_rows(p, config.k_points, config.rel_points, config.units, config.execution)?;
    let mut meta = metadata(config, p, &SCATTER_COLUMNS);
    if p.u != 0.0 {
        let a0 = hubbard_pair::scattering::scattering_length(QuasiMomentum::ZERO, p)?;
        meta = meta.with_extra("scattering_length_K0", config.units.length(a0, p));
    }
    Ok(Table::new(meta, rows)?)
}

fn dimer_table(config: &RunConfig) -> Result<Table, CliError> {
    let p = &config.params;
    if p.u == 0.0 {
        return Err(CliError::Usage("dimer needs a nonzero --U (no bound state at U = 0)".into()));
    }
    let rows = sweep::dimer_rows(p, config.k_points, config.units, config.execution)?;
    let meta = metadata(config, p, &DIMER_COLUMNS)
        .with_extra("single_particle_mass", config.units.mass(single_particle_effective_mass(p), p))
        .with_extra("dimer_mass_K0", config.units.mass(dimer_effective_mass(p)?, p))
        .with_extra("pair_hopping_J2", config.units.energy(effective_pair_hopping(p)?, p));
    Ok(Table::new(meta, rows)?)
}

/// Quantization length of the DOS output: one lattice constant per K grid point.
pub fn dos_length(config: &RunConfig, params: &LatticeParams) -> f64 {
    config.k_points as f64 * params.d
}

fn dos_table(config: &RunConfig, params: &LatticeParams) -> Result<Table, CliError> {
    let length = dos_length(config, params);
    let rows = sweep::dos_mesh(params, config.k_points, config.rel_points, length, config.units, config.execution)?;
    let meta = metadata(config, params, &DOS_COLUMNS).with_extra("L", config.units.length(length, params));
    Ok(Table::new(meta, rows)?)
}

/// Every file of the figure dataset as `(file name, table)`, rendered before
/// anything is written.
pub fn figure_tables(config: &RunConfig) -> Result<Vec<(String, Table)>, CliError> {
    let magnitude = match config.params.u {
        u if config.u_given && u != 0.0 => u.abs(),
        _ => FIGURE_INTERACTION * config.params.j,
    };
    let ext = config.format.extension();
    let mut files = Vec::new();
    let panels = [("K0", 0.0), ("Khalf", PI / 2.0), ("Kedge", PI)];
    for (label, sign) in [("attractive", -1.0), ("repulsive", 1.0)] {
        let p = config.params.with_u(sign * magnitude)?;
        let spectrum = spectrum_dataset(config, &p)?;
        files.push((format!("spectrum_{label}.{ext}"), spectrum.to_table()));
        for (panel, phase) in panels {
            let k = QuasiMomentum::from_phase(phase)?;
            let rows = sweep::wavefunction_rows(k, &p, FIGURE_PANEL_HALF_WIDTH, config.units)?;
            let meta = metadata(config, &p, &WAVEFUNCTION_COLUMNS)
                .with_extra("K", config.units.momentum(k, &p))
                .with_extra("kind", if k.is_zone_edge() { "localized" } else { "dimer" });
            files.push((format!("wavefunction_{label}_{panel}.{ext}"), Table::new(meta, rows)?));
        }
    }
    files.push((format!("dos.{ext}"), dos_table(config, &config.params)?));
    Ok(files)
}

/// Writes the figure dataset into the `--out` directory (default `figure-data`).
pub fn emit_figure_data(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let dir = config.out.clone().unwrap_or_else(|| PathBuf::from("figure-data"));
    let files = figure_tables(config)?
        .into_iter()
        .map(|(name, table)| Ok((dir.join(name), table.render(config.format)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    files
        .into_iter()
        .map(|(path, text)| {
            write_atomic(&path, &text)?;
            Ok(path)
        })
        .collect()
}

pub fn validation_plan(config: &RunConfig) -> ValidationPlan {
    let mut plan = ValidationPlan {
        j: config.params.j,
        d: config.params.d,
        ring_sites: config.ring_sites,
        half_width: config.half_width,
        tolerances: config.tolerances,
        ..ValidationPlan::default()
    };
    if config.u_given {
        plan.interactions = vec![config.params.u];
    } else {
        plan.interactions.iter_mut().for_each(|u| *u *= config.params.j);
    }
    plan
}

/// Runs the oracle suite; the verdict names the first failing point.
pub fn run_validation(config: &RunConfig) -> Result<(Vec<OracleReport>, Result<(), CliError>), CliError> {
    let reports = oracle::run_validation(&validation_plan(config), config.execution)?;
    let verdict = match reports.iter().find(|r| !r.pass) {
        Some(r) => Err(CliError::ValidationFailed(format!(
            "{}: {}",
            r.parameter_point,
            r.first_failure().unwrap_or_default()
        ))),
        None => Ok(()),
    };
    Ok((reports, verdict))
}
