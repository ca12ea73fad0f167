//! Two bosons on a periodic ring of `M` sites in the symmetrized occupation
//! basis, and its decomposition into ring-momentum blocks.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::eigen::diagonalize_symmetric;
use crate::error::{Error, Result};
use crate::model::{LatticeParams, QuasiMomentum};

/// Largest dense matrix dimension the oracle will allocate.
pub const DENSE_DIMENSION_BUDGET: usize = 5000;

/// Squared norm below which a projected Bloch vector is treated as zero.
const PROJECTION_CUTOFF: f64 = 1e-8;

/// Full two-boson Hamiltonian on a ring.
///
/// Basis state `(a, b)` with `a <= b` is `|2_a>` when `a == b` and
/// `|1_a, 1_b>` otherwise.
#[derive(Debug, Clone)]
pub struct FullHamiltonian {
    pub sites: usize,
    pub basis: Vec<(usize, usize)>,
    pub matrix: DMatrix<f64>,
}

/// Eigenvalues of one ring-momentum sector.
#[derive(Debug, Clone)]
pub struct MomentumBlock {
    /// Ring momentum index `n`, `K = 2 pi n / (M d)`.
    pub index: usize,
    pub k: QuasiMomentum,
    pub eigenvalues: Vec<f64>,
}

fn basis_index(sites: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    a * sites - a * a.saturating_sub(1) / 2 + (b - a)
}

pub fn build_full_hamiltonian(params: &LatticeParams, sites: usize) -> Result<FullHamiltonian> {
    if sites < 4 {
        return Err(Error::InvalidSize(format!("ring needs M >= 4 sites, got {sites}")));
    }
    let dimension = sites * (sites + 1) / 2;
    if dimension > DENSE_DIMENSION_BUDGET {
        return Err(Error::DimensionTooLarge { dimension, budget: DENSE_DIMENSION_BUDGET });
    }
    let basis: Vec<(usize, usize)> = (0..sites).flat_map(|a| (a..sites).map(move |b| (a, b))).collect();
    debug_assert!(basis.iter().enumerate().all(|(i, &(a, b))| basis_index(sites, a, b) == i));

    let mut matrix = DMatrix::zeros(dimension, dimension);
    for (col, &(a, b)) in basis.iter().enumerate() {
        let mut occupation = vec![0u32; sites];
        occupation[a] += 1;
        occupation[b] += 1;
        if a == b {
            // U/2 n (n - 1) with n = 2
            matrix[(col, col)] = params.u;
        }
        // -J (b_y^dag b_x) for every occupied x and neighbour y
        let occupied: &[usize] = if a == b { &[a][..] } else { &[a, b][..] };
        for &x in occupied {
            for y in [(x + 1) % sites, (x + sites - 1) % sites] {
                let n_x = occupation[x] as f64;
                let n_y = occupation[y] as f64;
                let amplitude = -params.j * n_x.sqrt() * (n_y + 1.0).sqrt();
                let (p, q) = if x == a { (y, b) } else { (a, y) };
                let row = basis_index(sites, p, q);
                matrix[(row, col)] += amplitude;
            }
        }
    }
    Ok(FullHamiltonian { sites, basis, matrix })
}

impl FullHamiltonian {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Index of the state obtained by shifting both particles one site along the ring.
    pub fn translation(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|&(a, b)| basis_index(self.sites, (a + 1) % self.sites, (b + 1) % self.sites))
            .collect()
    }

    /// Max-entry norm of `H T - T H` for the ring translation `T`.
    pub fn translation_commutator_norm(&self) -> f64 {
        let t = self.translation();
        let n = self.dim();
        let mut worst: f64 = 0.0;
        // (T H T^-1)[t(r), t(c)] = H[r, c]
        for c in 0..n {
            for r in 0..n {
                worst = worst.max((self.matrix[(t[r], t[c])] - self.matrix[(r, c)]).abs());
            }
        }
        worst
    }

    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(diagonalize_symmetric(&self.matrix)?.values)
    }

    /// Eigenvalues sector by sector, obtained by projecting every basis state
    /// onto the eigenspaces of the ring translation (a discrete Fourier sum
    /// over shifts) and diagonalizing `H` within each projected subspace.
    pub fn momentum_blocks(&self) -> Result<Vec<MomentumBlock>> {
        let m = self.sites;
        let n = self.dim();
        let t = self.translation();

        let mut seen = vec![false; n];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::with_capacity(m);
            let mut state = start;
            for _ in 0..m {
                seen[state] = true;
                orbit.push(state);
                state = t[state];
            }
            orbits.push(orbit);
        }

        (0..m)
            .map(|index| {
                let phase = 2.0 * PI * index as f64 / m as f64;
                let k = QuasiMomentum::from_phase(phase)?;
                let mut columns_re: Vec<Vec<f64>> = Vec::new();
                let mut columns_im: Vec<Vec<f64>> = Vec::new();
                for orbit in &orbits {
                    let mut re = vec![0.0; n];
                    let mut im = vec![0.0; n];
                    for (shift, &state) in orbit.iter().enumerate() {
                        let angle = -phase * shift as f64;
                        re[state] += angle.cos();
                        im[state] += angle.sin();
                    }
                    let norm2: f64 = re.iter().chain(&im).map(|x| x * x).sum();
                    if norm2 < PROJECTION_CUTOFF {
                        continue;
                    }
                    let inv = norm2.sqrt().recip();
                    re.iter_mut().chain(im.iter_mut()).for_each(|x| *x *= inv);
                    columns_re.push(re);
                    columns_im.push(im);
                }
                let eigenvalues = self.block_eigenvalues(&columns_re, &columns_im)?;
                Ok(MomentumBlock { index, k, eigenvalues })
            })
            .collect()
    }

    fn block_eigenvalues(&self, columns_re: &[Vec<f64>], columns_im: &[Vec<f64>]) -> Result<Vec<f64>> {
        let n = self.dim();
        let b = columns_re.len();
        if b == 0 {
            return Ok(Vec::new());
        }
        let v_re = DMatrix::from_fn(n, b, |r, c| columns_re[c][r]);
        let v_im = DMatrix::from_fn(n, b, |r, c| columns_im[c][r]);
        let hv_re = &self.matrix * &v_re;
        let hv_im = &self.matrix * &v_im;
        // V^dag H V = A + i B
        let a = v_re.transpose() * &hv_re + v_im.transpose() * &hv_im;
        let bm = v_re.transpose() * &hv_im - v_im.transpose() * &hv_re;
        // Hermitian block embedded as the real symmetric [[A, -B], [B, A]];
        // every eigenvalue of the block appears twice.
        let embedded = DMatrix::from_fn(2 * b, 2 * b, |r, c| {
            let (ri, ci) = (r % b, c % b);
            let sym = 0.5 * (a[(ri, ci)] + a[(ci, ri)]);
            let anti = 0.5 * (bm[(ri, ci)] - bm[(ci, ri)]);
            match (r < b, c < b) {
                (true, true) | (false, false) => sym,
                (true, false) => -anti,
                (false, true) => anti,
            }
        });
        let values = diagonalize_symmetric(&embedded)?.values;
        Ok(values.into_iter().step_by(2).collect())
    }
}

/// Non-interacting two-boson energies on the ring, from the quantized
/// single-particle momenta `2 pi n / M`, ascending.
pub fn free_ring_spectrum(params: &LatticeParams, sites: usize) -> Vec<f64> {
    let band = |n: usize| -2.0 * params.j * (2.0 * PI * n as f64 / sites as f64).cos();
    let mut energies: Vec<f64> = (0..sites)
        .flat_map(|a| (a..sites).map(move |b| band(a) + band(b)))
        .collect();
    energies.sort_by(f64::total_cmp);
    energies
}
