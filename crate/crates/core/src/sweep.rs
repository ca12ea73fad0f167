//! Grid sweeps over momenta and energies.
//!
//! Every sweep is a pure map over independent grid points. With the
//! `parallel` feature the map runs on the rayon pool; without it (or with
//! [`Execution::Sequential`]) it runs on the calling thread.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dimer::{binding_energy, dimer_alpha, dimer_energy, dimer_wavefunction, strong_coupling_energy, DimerState};
use crate::error::{Error, Result};
use crate::model::{collective_hopping, LatticeParams, QuasiMomentum};
use crate::scattering::{band_edges, density_of_states, ScatteringState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Order-preserving map over `items`.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Like [`map`], stopping at the first error.
pub fn try_map<T, R, E, F>(exec: Execution, items: &[T], f: F) -> std::result::Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> std::result::Result<R, E> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Output unit system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    /// Energies in `J`, momenta times `d`, lengths in `d`.
    #[default]
    Dimensionless,
    Raw,
}

impl Units {
    pub fn energy(self, e: f64, params: &LatticeParams) -> f64 {
        match self {
            Units::Dimensionless => e / params.j,
            Units::Raw => e,
        }
    }

    pub fn momentum(self, k: QuasiMomentum, params: &LatticeParams) -> f64 {
        match self {
            Units::Dimensionless => k.phase(),
            Units::Raw => k.value(params),
        }
    }

    pub fn length(self, x: f64, params: &LatticeParams) -> f64 {
        match self {
            Units::Dimensionless => x / params.d,
            Units::Raw => x,
        }
    }

    /// Masses in units of `hbar^2 / (J d^2)` when dimensionless.
    pub fn mass(self, m: f64, params: &LatticeParams) -> f64 {
        match self {
            Units::Dimensionless => m * params.j * params.d * params.d / (params.hbar * params.hbar),
            Units::Raw => m,
        }
    }
}

/// `points` evenly spaced momenta over `[-pi/d, pi/d]`, both edges included.
pub fn zone_grid(points: usize) -> Result<Vec<QuasiMomentum>> {
    if points < 2 {
        return Err(Error::InvalidSize(format!("grid needs at least 2 points, got {points}")));
    }
    (0..points)
        .map(|n| {
            let phase = if n + 1 == points { PI } else { -PI + 2.0 * PI * n as f64 / (points - 1) as f64 };
            QuasiMomentum::from_phase(phase)
        })
        .collect()
}

/// `points` evenly spaced relative momenta over `[0, pi/d]`.
pub fn relative_grid(points: usize) -> Result<Vec<QuasiMomentum>> {
    if points < 2 {
        return Err(Error::InvalidSize(format!("grid needs at least 2 points, got {points}")));
    }
    (0..points)
        .map(|n| {
            let phase = if n + 1 == points { PI } else { PI * n as f64 / (points - 1) as f64 };
            QuasiMomentum::from_phase(phase)
        })
        .collect()
}

/// One center-of-mass momentum of the two-particle spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "E_band_min")]
    pub e_band_min: f64,
    #[serde(rename = "E_band_max")]
    pub e_band_max: f64,
    #[serde(rename = "E_dimer")]
    pub e_dimer: Option<f64>,
    #[serde(rename = "E_binding")]
    pub e_binding: Option<f64>,
    pub alpha: Option<f64>,
}

pub fn spectrum_row(k: QuasiMomentum, params: &LatticeParams, units: Units) -> Result<SpectrumRow> {
    let (lo, hi) = band_edges(k, params);
    let (e_dimer, e_binding, alpha) = if params.u == 0.0 {
        (None, None, None)
    } else {
        let alpha = if k.is_zone_edge() { None } else { Some(dimer_alpha(k, params)?) };
        (
            Some(units.energy(dimer_energy(k, params)?, params)),
            Some(units.energy(binding_energy(k, params)?, params)),
            alpha,
        )
    };
    Ok(SpectrumRow {
        k: units.momentum(k, params),
        e_band_min: units.energy(lo, params),
        e_band_max: units.energy(hi, params),
        e_dimer,
        e_binding,
        alpha,
    })
}

/// Band edges and dimer branch over `k_points` momenta spanning the zone.
pub fn spectrum_rows(params: &LatticeParams, k_points: usize, units: Units, exec: Execution) -> Result<Vec<SpectrumRow>> {
    let grid = zone_grid(k_points)?;
    try_map(exec, &grid, |&k| spectrum_row(k, params, units))
}

pub const SCATTER_COLUMNS: [&str; 5] = ["K", "k", "E", "phase_shift", "band_edge_limit"];

/// Scattering energies and phase shifts on a `(K, k)` grid, `k in [0, pi/d]`.
/// The phase shift is empty where the band is flat.
pub fn scatter_rows(
    params: &LatticeParams,
    k_points: usize,
    rel_points: usize,
    units: Units,
    exec: Execution,
) -> Result<Vec<Vec<Option<f64>>>> {
    let pairs: Vec<(QuasiMomentum, QuasiMomentum)> = zone_grid(k_points)?
        .into_iter()
        .flat_map(|kc| relative_grid(rel_points).unwrap_or_default().into_iter().map(move |kr| (kc, kr)))
        .collect();
    try_map(exec, &pairs, |&(kc, kr)| {
        let (delta, edge) = match ScatteringState::new(kc, kr, params) {
            Ok(s) => (Some(s.phase_shift), Some(if s.band_edge_limit { 1.0 } else { 0.0 })),
            Err(Error::FlatBand) => (None, None),
            Err(e) => return Err(e),
        };
        let energy = crate::scattering::scattering_energy(kc, kr, params);
        Ok(vec![
            Some(units.momentum(kc, params)),
            Some(units.momentum(kr, params)),
            Some(units.energy(energy, params)),
            delta,
            edge,
        ])
    })
}

pub const DIMER_COLUMNS: [&str; 6] = ["K", "alpha", "C", "E_dimer", "E_binding", "E_strong_coupling"];

/// Dimer records across the zone.
pub fn dimer_rows(params: &LatticeParams, k_points: usize, units: Units, exec: Execution) -> Result<Vec<Vec<Option<f64>>>> {
    let grid = zone_grid(k_points)?;
    try_map(exec, &grid, |&k| {
        let s = DimerState::new(k, params)?;
        Ok(vec![
            Some(units.momentum(k, params)),
            s.alpha,
            Some(s.normalization_c),
            Some(units.energy(s.energy, params)),
            Some(units.energy(s.binding_energy, params)),
            Some(units.energy(strong_coupling_energy(k, params)?, params)),
        ])
    })
}

pub const DOS_COLUMNS: [&str; 3] = ["K", "E", "rho"];

/// Density of states on an `(E, K)` mesh strictly inside the band: the
/// zone-edge momenta are skipped and energies sit at bin midpoints of
/// `(-2 J_K, 2 J_K)`. `rho` is per unit of the output energy.
pub fn dos_mesh(
    params: &LatticeParams,
    k_points: usize,
    e_points: usize,
    length: f64,
    units: Units,
    exec: Execution,
) -> Result<Vec<Vec<Option<f64>>>> {
    if e_points == 0 {
        return Err(Error::InvalidSize("energy mesh needs at least 1 point".into()));
    }
    let grid: Vec<QuasiMomentum> = zone_grid(k_points)?.into_iter().filter(|k| !k.is_zone_edge()).collect();
    let per_k = try_map(exec, &grid, |&k| {
        let half = 2.0 * collective_hopping(k, params);
        (0..e_points)
            .map(|n| {
                let e = -half + 2.0 * half * (n as f64 + 0.5) / e_points as f64;
                let rho = density_of_states(e, k, length, params)?;
                // states per unit of the output energy
                let rho_out = rho / units.energy(1.0, params);
                Ok(vec![Some(units.momentum(k, params)), Some(units.energy(e, params)), Some(rho_out)])
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(per_k.into_iter().flatten().collect())
}

pub const WAVEFUNCTION_COLUMNS: [&str; 3] = ["i", "r", "amplitude"];

/// Dimer wavefunction samples at one momentum, for `|i| <= half_width`.
pub fn wavefunction_rows(
    k: QuasiMomentum,
    params: &LatticeParams,
    half_width: i64,
    units: Units,
) -> Result<Vec<Vec<Option<f64>>>> {
    let wf = dimer_wavefunction(k, params, Some(-half_width..=half_width))?;
    Ok(wf
        .samples
        .iter()
        .map(|&(i, a)| vec![Some(i as f64), Some(units.length(i as f64 * params.d, params)), Some(a)])
        .collect())
}
