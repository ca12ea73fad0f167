use thiserror::Error;

/// Errors raised by the model, the closed-form solutions and the oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be positive (got {value})")]
    NonPositive { name: &'static str, value: f64 },

    #[error("{name} must be finite (got {value})")]
    NonFinite { name: &'static str, value: f64 },

    /// The collective hopping vanishes at this center-of-mass momentum.
    #[error("flat band: collective hopping J_K vanishes at |K| = pi/d")]
    FlatBand,

    /// The dimer branch and the scattering length need a nonzero interaction.
    #[error("on-site interaction U is zero")]
    ZeroInteraction,

    /// tan(delta) diverges at sin(kd) = 0; `limit` is the one-sided limit -sign(U) pi/2.
    #[error("relative momentum at a band edge (sin(kd) = 0); limiting phase shift is {limit}")]
    SingularRelativeMomentum { limit: f64 },

    #[error("energy {energy} is outside the open scattering band (-{half_width}, {half_width})")]
    OutsideBand { energy: f64, half_width: f64 },

    #[error("matrix dimension {dimension} exceeds the budget of {budget}")]
    DimensionTooLarge { dimension: usize, budget: usize },

    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("eigensolver did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("malformed dataset: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
