//! Asymptotically free two-particle states: the scattering continuum, phase
//! shifts, standing-wave wavefunctions, scattering length and density of states.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{collective_hopping, LatticeParams, QuasiMomentum, ZONE_EDGE_TOLERANCE};
use crate::wavefunction::{Normalization, RelativeWavefunction, WavefunctionKind};

/// A scattering eigenstate labelled by center-of-mass and relative momenta.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringState {
    pub center_of_mass: QuasiMomentum,
    pub relative: QuasiMomentum,
    pub energy: f64,
    pub phase_shift: f64,
    /// Set when `sin(kd) = 0` and `phase_shift` holds the one-sided limit.
    pub band_edge_limit: bool,
}

impl ScatteringState {
    pub fn new(k_cm: QuasiMomentum, k_rel: QuasiMomentum, params: &LatticeParams) -> Result<Self> {
        let (phase_shift, band_edge_limit) = match phase_shift(k_cm, k_rel, params) {
            Ok(delta) => (delta, false),
            Err(Error::SingularRelativeMomentum { limit }) => (limit, true),
            Err(e) => return Err(e),
        };
        Ok(Self {
            center_of_mass: k_cm,
            relative: k_rel,
            energy: scattering_energy(k_cm, k_rel, params),
            phase_shift,
            band_edge_limit,
        })
    }

    /// Momenta of the two constituents, `K/2 + k` and `K/2 - k`.
    pub fn constituent_momenta(&self) -> Result<(QuasiMomentum, QuasiMomentum)> {
        let half = 0.5 * self.center_of_mass.phase();
        Ok((
            QuasiMomentum::from_phase(half + self.relative.phase())?,
            QuasiMomentum::from_phase(half - self.relative.phase())?,
        ))
    }
}

/// Continuum energy `-2 J_K cos(k d)`.
pub fn scattering_energy(k_cm: QuasiMomentum, k_rel: QuasiMomentum, params: &LatticeParams) -> f64 {
    -2.0 * collective_hopping(k_cm, params) * k_rel.phase().cos()
}

/// Lowest and highest continuum energies `(-2 J_K, 2 J_K)` at fixed `K`.
pub fn band_edges(k_cm: QuasiMomentum, params: &LatticeParams) -> (f64, f64) {
    let jk = collective_hopping(k_cm, params);
    // + 0.0 turns the flat-band -0 into 0
    (-2.0 * jk + 0.0, 2.0 * jk)
}

fn at_relative_band_edge(k_rel: QuasiMomentum) -> bool {
    let phase = k_rel.phase().abs();
    phase <= ZONE_EDGE_TOLERANCE * PI || k_rel.is_zone_edge()
}

/// Scattering phase shift from `tan(delta) = -U csc(kd) / (2 J_K)`, in `(-pi/2, pi/2)`.
///
/// At `sin(kd) = 0` with `U != 0` the formula is singular and the limit
/// `-sign(U) pi/2` is returned inside [`Error::SingularRelativeMomentum`].
pub fn phase_shift(k_cm: QuasiMomentum, k_rel: QuasiMomentum, params: &LatticeParams) -> Result<f64> {
    let jk = collective_hopping(k_cm, params);
    if jk == 0.0 {
        return Err(Error::FlatBand);
    }
    if params.u == 0.0 {
        return Ok(0.0);
    }
    if at_relative_band_edge(k_rel) {
        return Err(Error::SingularRelativeMomentum {
            limit: -params.u.signum() * FRAC_PI_2,
        });
    }
    let sin = k_rel.phase().sin();
    // atan(-U / (2 J_K sin k)) written through its complement to stay accurate
    // when the argument is huge.
    let ratio = 2.0 * jk * sin / params.u;
    let delta = if ratio.abs() < 1.0 {
        -ratio.signum() * FRAC_PI_2 + ratio.atan()
    } else {
        (-1.0 / ratio).atan()
    };
    Ok(delta)
}

/// Standing-wave scattering solution `2 cos(k |r_i| + delta)` on the sites `i_range`.
pub fn scattering_wavefunction(
    k_cm: QuasiMomentum,
    k_rel: QuasiMomentum,
    params: &LatticeParams,
    i_range: RangeInclusive<i64>,
) -> Result<RelativeWavefunction> {
    let delta = phase_shift(k_cm, k_rel, params)?;
    let k = k_rel.phase();
    let samples = i_range
        .map(|i| (i, 2.0 * (k * i.unsigned_abs() as f64 + delta).cos()))
        .collect();
    Ok(RelativeWavefunction {
        kind: WavefunctionKind::Scattering,
        k: k_cm,
        samples,
        normalization: Normalization::PlaneWaveAmplitude,
    })
}

/// Generalized 1D scattering length `a_K = -2 d J_K / U`.
pub fn scattering_length(k_cm: QuasiMomentum, params: &LatticeParams) -> Result<f64> {
    params.require_interaction()?;
    let jk = collective_hopping(k_cm, params);
    if jk == 0.0 {
        return Ok(0.0);
    }
    Ok(-2.0 * params.d * jk / params.u)
}

/// Density of relative-momentum states per unit energy,
/// `(L / 2 pi d) / sqrt((2 J_K)^2 - E^2)`, for `|E| < 2 J_K`.
pub fn density_of_states(
    energy: f64,
    k_cm: QuasiMomentum,
    length: f64,
    params: &LatticeParams,
) -> Result<f64> {
    if length.is_nan() || length <= 0.0 {
        return Err(Error::NonPositive { name: "L", value: length });
    }
    let jk = collective_hopping(k_cm, params);
    if jk == 0.0 {
        return Err(Error::FlatBand);
    }
    let half_width = 2.0 * jk;
    if energy.is_nan() || energy.abs() >= half_width {
        return Err(Error::OutsideBand { energy, half_width });
    }
    let root = ((half_width - energy) * (half_width + energy)).sqrt();
    Ok(length / (2.0 * PI * params.d) / root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use crate::model::single_particle_energy;

    fn q(phase: f64) -> QuasiMomentum {
        QuasiMomentum::from_phase(phase).unwrap()
    }

    fn params(u: f64) -> LatticeParams {
        LatticeParams::new(1.0, u).unwrap()
    }

    #[test]
    fn energy_examples() {
        let p = params(0.0);
        assert_eq!(scattering_energy(q(0.0), q(0.0), &p), -4.0);
        assert_eq!(scattering_energy(q(0.0), q(PI), &p), 4.0);
        assert_eq!(scattering_energy(q(PI), q(0.3), &p), 0.0);
        assert_eq!(band_edges(q(0.0), &p), (-4.0, 4.0));
        assert_eq!(band_edges(q(-PI), &p), (0.0, 0.0));
        let (lo, hi) = band_edges(q(PI / 2.0), &p);
        assert_relative_eq!(lo, -2.0 * 2f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(hi, 2.0 * 2f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn energy_is_sum_of_single_particle_bands() {
        let p = LatticeParams::new(0.7, 1.0).unwrap();
        for a in 0..=100 {
            for b in 0..=100 {
                let kc = q(-PI + 2.0 * PI * a as f64 / 100.0);
                let kr = q(-PI + 2.0 * PI * b as f64 / 100.0);
                let s = ScatteringState::new(kc, kr, &p);
                let state = match s {
                    Ok(s) => s,
                    Err(Error::FlatBand) => continue,
                    Err(e) => panic!("{e}"),
                };
                let (qx, qy) = state.constituent_momenta().unwrap();
                let sum = single_particle_energy(qx, &p) + single_particle_energy(qy, &p);
                assert!((sum - scattering_energy(kc, kr, &p)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn phase_shift_examples() {
        let free = phase_shift(q(0.4), q(1.1), &params(0.0)).unwrap();
        assert_eq!(free.to_bits(), 0.0f64.to_bits());
        let fermionized = phase_shift(q(0.0), q(PI / 2.0), &params(1e12)).unwrap();
        assert_relative_eq!(fermionized, -FRAC_PI_2, epsilon = 1e-11);
        let d = phase_shift(q(0.0), q(PI / 2.0), &params(5.0)).unwrap();
        assert_relative_eq!(d, (-1.25f64).atan(), epsilon = 1e-15);
        assert_relative_eq!(d, -0.89606, epsilon = 1e-5);
    }

    #[test]
    fn phase_shift_errors() {
        assert_eq!(phase_shift(q(PI), q(1.0), &params(1.0)), Err(Error::FlatBand));
        assert_eq!(
            phase_shift(q(0.0), q(0.0), &params(3.0)),
            Err(Error::SingularRelativeMomentum { limit: -FRAC_PI_2 })
        );
        assert_eq!(
            phase_shift(q(0.0), q(PI), &params(-3.0)),
            Err(Error::SingularRelativeMomentum { limit: FRAC_PI_2 })
        );
        let s = ScatteringState::new(q(0.0), q(0.0), &params(-1.0)).unwrap();
        assert!(s.band_edge_limit);
        assert_eq!(s.phase_shift, FRAC_PI_2);
    }

    #[test]
    fn wavefunction_examples() {
        let k = PI / 3.0;
        let free = scattering_wavefunction(q(0.5), q(k), &params(0.0), -4..=4).unwrap();
        for (i, a) in &free.samples {
            assert_relative_eq!(*a, 2.0 * (k * *i as f64).cos(), epsilon = 1e-14);
        }
        // U / J_K = 1e6 at K = 0 means U = 2e6 J
        let hard = scattering_wavefunction(q(0.0), q(k), &params(2e6), -10..=10).unwrap();
        let max = hard.amplitudes().map(f64::abs).fold(0.0, f64::max);
        assert!(hard.amplitude(0).unwrap().abs() < 1e-5 * max);

        let p = params(5.0);
        let wf = scattering_wavefunction(q(0.0), q(PI / 2.0), &p, -2..=2).unwrap();
        let e = scattering_energy(q(0.0), q(PI / 2.0), &p);
        let residuals = wf.recurrence_residuals(e, &p);
        assert_eq!(residuals.len(), 3);
        for (_, r) in residuals {
            assert!(r.abs() < 1e-10);
        }
        assert_eq!(wf.parity_defect(), 0.0);
    }

    #[test]
    fn matches_unnormalized_display_form() {
        // C cos(k r) + C U csc(k) / (2 J_K) sin(k|r|) with C = psi(0)
        let p = params(-2.3);
        let (kc, kr) = (q(0.9), q(0.7));
        let wf = scattering_wavefunction(kc, kr, &p, -6..=6).unwrap();
        let c = wf.amplitude(0).unwrap();
        let jk = collective_hopping(kc, &p);
        for &(i, a) in &wf.samples {
            let r = i as f64;
            let expected = c * (0.7 * r).cos()
                + c * p.u / (0.7f64.sin() * 2.0 * jk) * (0.7 * r.abs()).sin();
            assert_relative_eq!(a, expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn scattering_length_examples() {
        assert_relative_eq!(scattering_length(q(0.0), &params(5.0)).unwrap(), -0.8);
        assert_relative_eq!(scattering_length(q(0.0), &params(-5.0)).unwrap(), 0.8);
        assert_eq!(scattering_length(q(PI), &params(5.0)).unwrap(), 0.0);
        assert_eq!(scattering_length(q(0.0), &params(0.0)), Err(Error::ZeroInteraction));
    }

    #[test]
    fn scattering_length_from_phase_slope() {
        let h = 1e-5;
        for u in [5.0, -5.0] {
            let p = params(u);
            let delta = |k: f64| phase_shift(q(0.0), q(k), &p).unwrap();
            let slope = (delta(2.0 * h) - delta(h)) / h;
            assert_relative_eq!(-slope, scattering_length(q(0.0), &p).unwrap(), max_relative = 1e-4);
        }
    }

    #[test]
    fn density_of_states_examples() {
        let p = params(0.0);
        assert_relative_eq!(
            density_of_states(0.0, q(0.0), 1.0, &p).unwrap(),
            1.0 / (8.0 * PI)
        );
        assert_relative_eq!(
            density_of_states(0.0, q(PI / 2.0), 3.0, &p).unwrap(),
            3.0 / (2.0 * PI * 2.0 * 2f64.sqrt()),
            max_relative = 1e-14
        );
        assert!(matches!(
            density_of_states(4.0, q(0.0), 1.0, &p),
            Err(Error::OutsideBand { .. })
        ));
        assert_eq!(density_of_states(0.0, q(PI), 1.0, &p), Err(Error::FlatBand));
        assert!(density_of_states(0.0, q(0.0), 0.0, &p).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn phase_shift_odd_in_u_and_bounded(u in -50.0f64..50.0, kc in -3.1f64..3.1, kr in 0.01f64..3.13) {
                let p = params(u);
                let m = params(-u);
                let d = phase_shift(q(kc), q(kr), &p).unwrap();
                let dm = phase_shift(q(kc), q(kr), &m).unwrap();
                prop_assert!((d + dm).abs() < 1e-14);
                prop_assert!(d.abs() < FRAC_PI_2);
                if u != 0.0 {
                    prop_assert_eq!(d.signum(), -u.signum());
                }
            }

            #[test]
            fn phase_shift_monotone_in_strength(u in 0.01f64..50.0, scale in 1.001f64..10.0, kc in -3.0f64..3.0, kr in 0.01f64..3.13) {
                let small = phase_shift(q(kc), q(kr), &params(u)).unwrap().abs();
                let large = phase_shift(q(kc), q(kr), &params(u * scale)).unwrap().abs();
                prop_assert!(large >= small);
            }

            #[test]
            fn wavefunction_satisfies_recurrence(u in -50.0f64..50.0, kc in -3.0f64..3.0, kr in 0.01f64..3.13) {
                let p = params(u);
                let wf = scattering_wavefunction(q(kc), q(kr), &p, -30..=30).unwrap();
                let e = scattering_energy(q(kc), q(kr), &p);
                prop_assert!(wf.max_recurrence_residual(e, &p) < 1e-10 * u.abs().max(p.j));
                prop_assert_eq!(wf.parity_defect(), 0.0);
            }
        }
    }
}
