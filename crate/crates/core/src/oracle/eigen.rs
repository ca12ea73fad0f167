//! Real symmetric eigensolvers.
//!
//! Tridiagonal matrices go through an implicit-shift QL iteration (with or
//! without eigenvector accumulation) and shifted inverse iteration for single
//! eigenvectors. Dense matrices are handed to nalgebra's symmetric solver.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

const MAX_QL_ITERATIONS: usize = 60;
const MAX_DENSE_ITERATIONS: usize = 10_000;

/// Eigenvalues in ascending order; column `j` of `vectors` belongs to `values[j]`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl Eigen {
    fn sorted(values: Vec<f64>, vectors: DMatrix<f64>) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let sorted_values = order.iter().map(|&i| values[i]).collect();
        let sorted_vectors = DMatrix::from_fn(vectors.nrows(), order.len(), |r, c| vectors[(r, order[c])]);
        Self { values: sorted_values, vectors: sorted_vectors }
    }
}

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diagonal: Vec<f64>,
    /// `off_diagonal[i]` couples rows `i` and `i + 1`.
    pub off_diagonal: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diagonal: Vec<f64>, off_diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() || off_diagonal.len() + 1 != diagonal.len() {
            return Err(Error::InvalidSize(format!(
                "tridiagonal needs n >= 1 diagonal and n - 1 off-diagonal entries (got {} and {})",
                diagonal.len(),
                off_diagonal.len()
            )));
        }
        Ok(Self { diagonal, off_diagonal })
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (i, &d) in self.diagonal.iter().enumerate() {
            m[(i, i)] = d;
        }
        for (i, &e) in self.off_diagonal.iter().enumerate() {
            m[(i, i + 1)] = e;
            m[(i + 1, i)] = e;
        }
        m
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut y = self.diagonal[i] * x[i];
                if i > 0 {
                    y += self.off_diagonal[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.off_diagonal[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diagonal[i].abs();
                if i > 0 {
                    s += self.off_diagonal[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.off_diagonal[i].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    /// All eigenvalues, ascending. O(n^2).
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut d = self.diagonal.clone();
        let mut e = self.off_diagonal.clone();
        e.push(0.0);
        implicit_ql(&mut d, &mut e, None)?;
        d.sort_by(f64::total_cmp);
        Ok(d)
    }

    /// All eigenpairs. O(n^3) because of the eigenvector accumulation.
    pub fn eigen(&self) -> Result<Eigen> {
        let n = self.dim();
        let mut d = self.diagonal.clone();
        let mut e = self.off_diagonal.clone();
        e.push(0.0);
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
        implicit_ql(&mut d, &mut e, Some(&mut z))?;
        let vectors = DMatrix::from_column_slice(n, n, &z);
        Ok(Eigen::sorted(d, vectors))
    }

    /// Unit eigenvector for an (accurately known) eigenvalue, by inverse iteration.
    pub fn eigenvector_near(&self, eigenvalue: f64) -> Vec<f64> {
        let n = self.dim();
        let scale = self.norm_inf().max(f64::MIN_POSITIVE);
        let lu = TridiagonalLu::factor(self, eigenvalue, f64::EPSILON * scale);
        // deterministic start vector with no special symmetry
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_75).fract()).collect();
        for _ in 0..4 {
            lu.solve(&mut x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 || !norm.is_finite() {
                break;
            }
            x.iter_mut().for_each(|v| *v /= norm);
        }
        x
    }
}

/// Implicit-shift QL on a tridiagonal matrix with diagonal `d` and
/// sub-diagonal `e` (`e[n-1]` is scratch). On return `d` holds the
/// eigenvalues; when `z` is given (column-major, n x n) its columns are
/// rotated into the eigenvectors.
fn implicit_ql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence { iterations: MAX_QL_ITERATIONS });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    let (left, right) = z.split_at_mut((i + 1) * n);
                    let col_i = &mut left[i * n..];
                    let col_next = &mut right[..n];
                    for (zi, zn) in col_i.iter_mut().zip(col_next.iter_mut()) {
                        let f = *zn;
                        *zn = s * *zi + c * f;
                        *zi = c * *zi - s * f;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// LU factorization with partial pivoting of `T - shift I` (LAPACK gttrf layout).
struct TridiagonalLu {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    upper2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    fn factor(t: &SymTridiagonal, shift: f64, tiny: f64) -> Self {
        let n = t.dim();
        let mut diag: Vec<f64> = t.diagonal.iter().map(|d| d - shift).collect();
        let mut lower = t.off_diagonal.clone();
        let mut upper = t.off_diagonal.clone();
        let mut upper2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if diag[i].abs() >= lower[i].abs() {
                if diag[i] == 0.0 {
                    diag[i] = tiny;
                }
                let fact = lower[i] / diag[i];
                lower[i] = fact;
                diag[i + 1] -= fact * upper[i];
            } else {
                let fact = diag[i] / lower[i];
                diag[i] = lower[i];
                lower[i] = fact;
                let temp = upper[i];
                upper[i] = diag[i + 1];
                diag[i + 1] = temp - fact * diag[i + 1];
                if i + 2 < n {
                    upper2[i] = upper[i + 1];
                    upper[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        for d in diag.iter_mut() {
            if d.abs() < tiny {
                *d = tiny.copysign(*d);
            }
        }
        Self { lower, diag, upper, upper2, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.diag.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let t = b[i];
                b[i] = b[i + 1];
                b[i + 1] = t - self.lower[i] * b[i];
            } else {
                b[i + 1] -= self.lower[i] * b[i];
            }
        }
        b[n - 1] /= self.diag[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.upper[n - 2] * b[n - 1]) / self.diag[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.upper[i] * b[i + 1] - self.upper2[i] * b[i + 2]) / self.diag[i];
        }
    }
}

/// Ascending eigenvalues and orthonormal eigenvectors of a dense real
/// symmetric matrix. The matrix must be symmetric to the bit.
pub fn diagonalize_symmetric(matrix: &DMatrix<f64>) -> Result<Eigen> {
    let n = matrix.nrows();
    if n == 0 || matrix.ncols() != n {
        return Err(Error::InvalidSize(format!(
            "expected a non-empty square matrix, got {}x{}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    for row in 0..n {
        for col in row + 1..n {
            if matrix[(row, col)] != matrix[(col, row)] {
                return Err(Error::NotSymmetric { row, col });
            }
        }
    }
    let eig = SymmetricEigen::try_new(matrix.clone(), f64::EPSILON, MAX_DENSE_ITERATIONS)
        .ok_or(Error::NoConvergence { iterations: MAX_DENSE_ITERATIONS })?;
    Ok(Eigen::sorted(eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
}
