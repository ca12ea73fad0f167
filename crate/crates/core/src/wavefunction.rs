use serde::{Deserialize, Serialize};

use crate::model::{collective_hopping, LatticeParams, QuasiMomentum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WavefunctionKind {
    Scattering,
    Dimer,
    Localized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Sum of squared amplitudes over all of Z equals one.
    UnitSumOfSquares,
    /// Incoming and outgoing plane waves with unit amplitude, `2 cos(k|r| + delta)`.
    PlaneWaveAmplitude,
}

/// Relative-coordinate wavefunction `psi_K(r_i)` sampled at sites `r_i = d i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelativeWavefunction {
    pub kind: WavefunctionKind,
    pub k: QuasiMomentum,
    /// `(i, amplitude)` ordered by increasing `i`.
    pub samples: Vec<(i64, f64)>,
    pub normalization: Normalization,
}

impl RelativeWavefunction {
    pub fn amplitude(&self, i: i64) -> Option<f64> {
        let first = self.samples.first()?.0;
        let idx = usize::try_from(i - first).ok()?;
        self.samples.get(idx).map(|&(_, a)| a)
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.samples.iter().map(|&(_, a)| a * a).sum()
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|&(_, a)| a)
    }

    /// Largest deviation from `amplitude(i) = amplitude(-i)` over sampled pairs.
    pub fn parity_defect(&self) -> f64 {
        self.samples
            .iter()
            .filter_map(|&(i, a)| self.amplitude(-i).map(|b| (a - b).abs()))
            .fold(0.0, f64::max)
    }

    /// Residual of the relative-coordinate Schrödinger recurrence
    /// `-J_K [psi(i-1) + psi(i+1)] + U delta_{i0} psi(i) - E psi(i)`
    /// at every sampled site whose two neighbours are also sampled.
    pub fn recurrence_residuals(&self, energy: f64, params: &LatticeParams) -> Vec<(i64, f64)> {
        let jk = collective_hopping(self.k, params);
        self.samples
            .windows(3)
            .map(|w| {
                let (i, centre) = w[1];
                let onsite = if i == 0 { params.u } else { 0.0 };
                let r = -jk * (w[0].1 + w[2].1) + (onsite - energy) * centre;
                (i, r)
            })
            .collect()
    }

    pub fn max_recurrence_residual(&self, energy: f64, params: &LatticeParams) -> f64 {
        self.recurrence_residuals(energy, params)
            .into_iter()
            .map(|(_, r)| r.abs())
            .fold(0.0, f64::max)
    }
}
