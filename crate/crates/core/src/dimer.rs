//! Interaction-bound dimers: exponential decay factor, energies, normalized
//! wavefunctions, binding energies, effective mass and the strong-coupling limit.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{collective_hopping, single_particle_effective_mass, LatticeParams, QuasiMomentum};
use crate::scattering::band_edges;
use crate::wavefunction::{Normalization, RelativeWavefunction, WavefunctionKind};

/// Above this `|U/(2 J_K)|` the decay factor is evaluated in reciprocal form.
const RECIPROCAL_FORM_THRESHOLD: f64 = 1e4;

/// Truncation exponent: samples out to `|i| <= ceil(36 / |ln alpha|)` leave a
/// norm deficit below `exp(-72)`.
const TRUNCATION_EXPONENT: f64 = 36.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InteractionSign {
    Attractive,
    Repulsive,
}

impl InteractionSign {
    pub fn of(u: f64) -> Result<Self> {
        if u < 0.0 {
            Ok(Self::Attractive)
        } else if u > 0.0 {
            Ok(Self::Repulsive)
        } else {
            Err(Error::ZeroInteraction)
        }
    }
}

/// A bound pair at center-of-mass momentum `K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimerState {
    pub k: QuasiMomentum,
    /// Decay factor of `psi(i) = C alpha^|i|`; `None` on the zone edge where
    /// the state is localized on a single site.
    pub alpha: Option<f64>,
    pub energy: f64,
    pub binding_energy: f64,
    pub normalization_c: f64,
    pub interaction_sign: InteractionSign,
}

impl DimerState {
    pub fn new(k: QuasiMomentum, params: &LatticeParams) -> Result<Self> {
        let interaction_sign = InteractionSign::of(params.u)?;
        let (alpha, normalization_c) = if k.is_zone_edge() {
            (None, 1.0)
        } else {
            (Some(dimer_alpha(k, params)?), normalization_constant(k, params)?)
        };
        Ok(Self {
            k,
            alpha,
            energy: dimer_energy(k, params)?,
            binding_energy: binding_energy(k, params)?,
            normalization_c,
            interaction_sign,
        })
    }
}

fn reduced_interaction(k: QuasiMomentum, params: &LatticeParams) -> Result<f64> {
    params.require_interaction()?;
    let jk = collective_hopping(k, params);
    if jk == 0.0 {
        return Err(Error::FlatBand);
    }
    Ok(params.u / (2.0 * jk))
}

/// The normalizable root `alpha_K` with `|alpha_K| < 1`.
///
/// Positive for `U < 0`, negative for `U > 0`.
pub fn dimer_alpha(k: QuasiMomentum, params: &LatticeParams) -> Result<f64> {
    let reduced = reduced_interaction(k, params)?;
    let magnitude = reduced.abs();
    let root = magnitude.hypot(1.0);
    let alpha = if magnitude > RECIPROCAL_FORM_THRESHOLD {
        1.0 / (magnitude + root)
    } else {
        root - magnitude
    };
    Ok(if params.u < 0.0 { alpha } else { -alpha })
}

fn normalization_constant(k: QuasiMomentum, params: &LatticeParams) -> Result<f64> {
    let reduced = reduced_interaction(k, params)?;
    Ok(reduced.abs().sqrt() / reduced.hypot(1.0).sqrt())
}

/// Dimer energy `sign(U) sqrt(U^2 + 4 J_K^2)`; equals `U` on the zone edge.
pub fn dimer_energy(k: QuasiMomentum, params: &LatticeParams) -> Result<f64> {
    params.require_interaction()?;
    let jk = collective_hopping(k, params);
    Ok(params.u.signum() * params.u.hypot(2.0 * jk))
}

/// Normalized relative wavefunction `C alpha^|i|`, or the single-site state on
/// the zone edge.
///
/// With `i_range = None` the samples cover `|i| <= ceil(36 / |ln |alpha||)`
/// (just `i = 0` for the localized state).
pub fn dimer_wavefunction(
    k: QuasiMomentum,
    params: &LatticeParams,
    i_range: Option<RangeInclusive<i64>>,
) -> Result<RelativeWavefunction> {
    params.require_interaction()?;
    if k.is_zone_edge() {
        let range = i_range.unwrap_or(0..=0);
        let samples = range.map(|i| (i, if i == 0 { 1.0 } else { 0.0 })).collect();
        return Ok(RelativeWavefunction {
            kind: WavefunctionKind::Localized,
            k,
            samples,
            normalization: Normalization::UnitSumOfSquares,
        });
    }
    let alpha = dimer_alpha(k, params)?;
    let c = normalization_constant(k, params)?;
    let range = i_range.unwrap_or_else(|| {
        let n = default_half_width(alpha);
        -n..=n
    });
    let samples = range
        .map(|i| {
            let power = i.unsigned_abs().min(i32::MAX as u64) as i32;
            (i, c * alpha.powi(power))
        })
        .collect();
    Ok(RelativeWavefunction {
        kind: WavefunctionKind::Dimer,
        k,
        samples,
        normalization: Normalization::UnitSumOfSquares,
    })
}

/// Half-width `ceil(36 / |ln |alpha||)` of the default sample range.
pub fn default_half_width(alpha: f64) -> i64 {
    let decay = alpha.abs().ln().abs();
    if decay == 0.0 {
        return i64::MAX / 4;
    }
    (TRUNCATION_EXPONENT / decay).ceil().max(1.0) as i64
}

/// Distance from the nearest scattering-band edge: measured from the band
/// bottom for attractive pairs and from the band top for repulsive ones.
pub fn binding_energy(k: QuasiMomentum, params: &LatticeParams) -> Result<f64> {
    let energy = dimer_energy(k, params)?;
    let (bottom, top) = band_edges(k, params);
    Ok(if params.u < 0.0 { energy - bottom } else { energy - top })
}

/// Dimer effective mass at `K = 0`, `+- hbar^2 sqrt(U^2 + 16 J^2) / (4 d^2 J^2)`;
/// positive for attraction, negative for repulsion.
pub fn dimer_effective_mass(params: &LatticeParams) -> Result<f64> {
    params.require_interaction()?;
    let LatticeParams { j, u, d, hbar } = *params;
    let magnitude = hbar * hbar * u.hypot(4.0 * j) / (4.0 * d * d * j * j);
    Ok(-u.signum() * magnitude)
}

/// Inverse finite-difference curvature of the dimer dispersion at any `K`,
/// times `hbar^2`. Only a numerical estimate; the closed form exists at `K = 0`.
pub fn dimer_curvature_mass(k: QuasiMomentum, params: &LatticeParams, step: f64) -> Result<f64> {
    let energy_at = |phase: f64| dimer_energy(QuasiMomentum::from_phase(phase)?, params);
    let centre = k.phase();
    let h = step * params.d;
    let second = (energy_at(centre + h)? - 2.0 * energy_at(centre)? + energy_at(centre - h)?)
        / (step * step);
    Ok(params.hbar * params.hbar / second)
}

/// Effective dimer tunnelling rate `J2 = -2 J^2 / U`.
pub fn effective_pair_hopping(params: &LatticeParams) -> Result<f64> {
    params.require_interaction()?;
    Ok(-2.0 * params.j * params.j / params.u)
}

/// Strong-coupling dimer dispersion `(U - 2 J2) - 2 J2 cos(K d)`.
pub fn strong_coupling_energy(k: QuasiMomentum, params: &LatticeParams) -> Result<f64> {
    let j2 = effective_pair_hopping(params)?;
    Ok((params.u - 2.0 * j2) - 2.0 * j2 * k.phase().cos())
}

/// Remainder bound `32 J^4 / |U|^3` on the strong-coupling dispersion.
pub fn strong_coupling_error_bound(params: &LatticeParams) -> Result<f64> {
    params.require_interaction()?;
    Ok(32.0 * params.j.powi(4) / params.u.abs().powi(3))
}

/// `2 m*`, the weak-interaction limit of `|M*|`.
pub fn weak_coupling_pair_mass(params: &LatticeParams) -> f64 {
    2.0 * single_particle_effective_mass(params)
}
