use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Engine errors shared by the geometry, chaos-game and session layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("IFS must contain at least one map")]
    EmptySystem,

    #[error("affine map coefficient {name} is not finite")]
    NonFiniteCoefficient { name: &'static str },

    #[error("invalid map weights: {0}")]
    InvalidWeights(String),

    #[error("point {index} has a non-finite coordinate")]
    NonFinitePoint { index: usize },

    #[error("n_points must be at least 1")]
    ZeroPoints,

    #[error("chaos game orbit left the finite range at step {step} (system is not contractive)")]
    Diverged { step: usize },

    #[error("point set is empty")]
    EmptyPointSet,

    #[error("degenerate affine basis: |det T| = {det:e} is below the threshold {threshold:e}")]
    DegenerateBasis { det: f64, threshold: f64 },

    #[error("barycentric components sum to {sum}, expected 1")]
    NotAffineCombination { sum: f64 },
}
