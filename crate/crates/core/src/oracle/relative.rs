use serde::{Deserialize, Serialize};

use super::eigen::{Eigen, SymTridiagonal};
use crate::error::{Error, Result};
use crate::model::{collective_hopping, LatticeParams, QuasiMomentum};

/// Largest relative-chain dimension accepted by [`build_relative_hamiltonian`].
pub const TRIDIAGONAL_DIMENSION_BUDGET: usize = 10_000_000;

/// Relative-coordinate Hamiltonian at fixed `K` on the open chain `i in [-N, N]`:
/// hopping `-J_K` between neighbours and `U` on the `i = 0` site.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeHamiltonian {
    pub k: QuasiMomentum,
    pub half_width: usize,
    pub matrix: SymTridiagonal,
}

pub fn build_relative_hamiltonian(
    k: QuasiMomentum,
    params: &LatticeParams,
    half_width: usize,
) -> Result<RelativeHamiltonian> {
    if half_width == 0 {
        return Err(Error::InvalidSize("relative chain needs N >= 1".into()));
    }
    let dimension = half_width.checked_mul(2).and_then(|v| v.checked_add(1)).unwrap_or(usize::MAX);
    if dimension > TRIDIAGONAL_DIMENSION_BUDGET {
        return Err(Error::DimensionTooLarge { dimension, budget: TRIDIAGONAL_DIMENSION_BUDGET });
    }
    let jk = collective_hopping(k, params);
    let mut diagonal = vec![0.0; dimension];
    diagonal[half_width] = params.u;
    let matrix = SymTridiagonal::new(diagonal, vec![-jk; dimension - 1])?;
    Ok(RelativeHamiltonian { k, half_width, matrix })
}

impl RelativeHamiltonian {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Relative site `i` of row `row`.
    pub fn site(&self, row: usize) -> i64 {
        row as i64 - self.half_width as i64
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.matrix.eigenvalues()
    }

    pub fn eigen(&self) -> Result<Eigen> {
        self.matrix.eigen()
    }

    /// Eigenvector for `eigenvalue` with the sign fixed so that the `i = 0`
    /// amplitude (or the first nonzero one) is positive.
    pub fn eigenvector(&self, eigenvalue: f64) -> Vec<f64> {
        let mut v = self.matrix.eigenvector_near(eigenvalue);
        fix_sign(&mut v, self.half_width);
        v
    }

    /// Norm of the part of `v` that is odd under `i -> -i`.
    pub fn odd_part_norm(&self, v: &[f64]) -> f64 {
        let n = self.dim();
        let sum: f64 = (0..n).map(|r| (0.5 * (v[r] - v[n - 1 - r])).powi(2)).sum();
        sum.sqrt()
    }

    /// Gershgorin interval `[-2J_K - |U|, 2J_K + |U|]`.
    pub fn gershgorin_bounds(&self, params: &LatticeParams) -> (f64, f64) {
        let r = 2.0 * collective_hopping(self.k, params) + params.u.abs();
        (-r, r)
    }
}

/// Makes the amplitude at `centre` positive, or the first nonzero one if that vanishes.
pub fn fix_sign(v: &mut [f64], centre: usize) {
    let pivot = if v.get(centre).is_some_and(|x| x.abs() > 1e-300) {
        v[centre]
    } else {
        v.iter().copied().find(|x| x.abs() > 1e-300).unwrap_or(1.0)
    };
    if pivot < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Eigenvalues split into the scattering band and at most one isolated bound state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumClassification {
    pub band: Vec<usize>,
    pub bound: Option<usize>,
}

/// Band edges are widened by this multiple of `J` before looking for isolated levels.
pub const CLASSIFICATION_MARGIN: f64 = 1e-9;

/// Labels every eigenvalue inside `[-2J_K - eps, 2J_K + eps]` as band and the
/// one outside (farthest, should there be several) as the bound candidate.
pub fn classify_spectrum(eigenvalues: &[f64], k: QuasiMomentum, params: &LatticeParams) -> SpectrumClassification {
    let edge = 2.0 * collective_hopping(k, params) + CLASSIFICATION_MARGIN * params.j;
    let mut band = Vec::with_capacity(eigenvalues.len());
    let mut bound: Option<usize> = None;
    for (idx, &e) in eigenvalues.iter().enumerate() {
        if e.abs() <= edge {
            band.push(idx);
            continue;
        }
        match bound {
            Some(prev) if eigenvalues[prev].abs() >= e.abs() => band.push(idx),
            Some(prev) => {
                band.push(prev);
                bound = Some(idx);
            }
            None => bound = Some(idx),
        }
    }
    band.sort_unstable();
    SpectrumClassification { band, bound }
}
