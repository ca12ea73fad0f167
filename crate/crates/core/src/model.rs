//! Lattice parameters, Brillouin-zone arithmetic and single-particle results.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance (in units of the zone half-width) within which a
/// momentum is treated as sitting on the zone edge.
pub const ZONE_EDGE_TOLERANCE: f64 = 1e-12;

/// Physical constants of the two-boson Hubbard model.
///
/// `j` is the nearest-neighbour tunnel coupling, `u` the on-site interaction,
/// `d` the lattice constant and `hbar` the reduced Planck constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeParams {
    pub j: f64,
    pub u: f64,
    pub d: f64,
    pub hbar: f64,
}

impl LatticeParams {
    /// Parameters with `d = hbar = 1`.
    pub fn new(j: f64, u: f64) -> Result<Self> {
        Self::with_units(j, u, 1.0, 1.0)
    }

    pub fn with_units(j: f64, u: f64, d: f64, hbar: f64) -> Result<Self> {
        for (name, value) in [("J", j), ("U", u), ("d", d), ("hbar", hbar)] {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
        }
        for (name, value) in [("J", j), ("d", d), ("hbar", hbar)] {
            if value <= 0.0 {
                return Err(Error::NonPositive { name, value });
            }
        }
        Ok(Self { j, u, d, hbar })
    }

    /// Same lattice with a different interaction strength.
    pub fn with_u(&self, u: f64) -> Result<Self> {
        Self::with_units(self.j, u, self.d, self.hbar)
    }

    /// Half-width of the first Brillouin zone, pi/d.
    pub fn zone_half_width(&self) -> f64 {
        PI / self.d
    }

    pub(crate) fn require_interaction(&self) -> Result<()> {
        if self.u == 0.0 {
            Err(Error::ZeroInteraction)
        } else {
            Ok(())
        }
    }
}

/// A lattice momentum folded into the first Brillouin zone.
///
/// Stored as the dimensionless phase `q d` in `[-pi, pi]` so that folding is
/// independent of the lattice constant.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QuasiMomentum(f64);

impl QuasiMomentum {
    pub const ZERO: QuasiMomentum = QuasiMomentum(0.0);
    pub const ZONE_EDGE: QuasiMomentum = QuasiMomentum(PI);

    /// Folds a dimensionless phase `q d` into `[-pi, pi]`.
    pub fn from_phase(phase: f64) -> Result<Self> {
        if !phase.is_finite() {
            return Err(Error::NonFinite { name: "momentum", value: phase });
        }
        if (-PI..=PI).contains(&phase) {
            return Ok(Self(phase));
        }
        let mut folded = phase.rem_euclid(2.0 * PI);
        if folded > PI {
            folded -= 2.0 * PI;
        }
        Ok(Self(folded))
    }

    /// The dimensionless phase `q d`.
    pub fn phase(self) -> f64 {
        self.0
    }

    /// The momentum in inverse-length units.
    pub fn value(self, params: &LatticeParams) -> f64 {
        self.0 / params.d
    }

    pub fn is_zone_edge(self) -> bool {
        (self.0.abs() - PI).abs() <= ZONE_EDGE_TOLERANCE * PI
    }

}

impl std::ops::Neg for QuasiMomentum {
    type Output = Self;

    fn neg(self) -> Self {
        Self(-self.0)
    }
}

/// Folds a raw momentum (inverse-length units) into the first Brillouin zone.
pub fn fold_to_zone(q: f64, params: &LatticeParams) -> Result<QuasiMomentum> {
    if !q.is_finite() {
        return Err(Error::NonFinite { name: "momentum", value: q });
    }
    QuasiMomentum::from_phase(q * params.d)
}

/// Bloch band of a single particle, `-2J cos(q d)`.
pub fn single_particle_energy(q: QuasiMomentum, params: &LatticeParams) -> f64 {
    -2.0 * params.j * q.phase().cos()
}

/// Band-bottom effective mass `hbar^2 / (2 J d^2)`.
pub fn single_particle_effective_mass(params: &LatticeParams) -> f64 {
    params.hbar * params.hbar / (2.0 * params.j * params.d * params.d)
}

/// Collective hopping `J_K = 2J cos(K d / 2)` of the relative coordinate.
///
/// Exactly zero on the zone edge.
pub fn collective_hopping(k: QuasiMomentum, params: &LatticeParams) -> f64 {
    if k.is_zone_edge() {
        return 0.0;
    }
    2.0 * params.j * (0.5 * k.phase()).cos()
}
