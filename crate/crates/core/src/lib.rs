//! Two bosons in a one-dimensional Hubbard lattice.
//!
//! Closed-form scattering and bound-dimer solutions of the two-particle
//! problem, and an exact-diagonalization oracle that checks them.

pub mod dataset;
pub mod dimer;
pub mod error;
pub mod model;
pub mod oracle;
pub mod scattering;
pub mod sweep;
pub mod wavefunction;

pub use error::{Error, Result};
pub use model::{LatticeParams, QuasiMomentum};
