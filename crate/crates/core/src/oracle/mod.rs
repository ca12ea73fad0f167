//! Exact-diagonalization oracle.
//!
//! Builds finite-lattice Hamiltonians directly from the lattice Schrödinger
//! equation, diagonalizes them and compares the result with the closed forms
//! in [`crate::scattering`] and [`crate::dimer`].

pub mod eigen;
pub mod full;
pub mod quadrature;
pub mod relative;
pub mod report;

pub use eigen::{diagonalize_symmetric, Eigen, SymTridiagonal};
pub use full::{build_full_hamiltonian, free_ring_spectrum, FullHamiltonian, MomentumBlock};
pub use relative::{build_relative_hamiltonian, classify_spectrum, RelativeHamiltonian, SpectrumClassification};
pub use report::{
    compare_relative, compare_ring, dos_histogram, run_validation, OracleReport, Tolerances, ValidationPlan,
};
