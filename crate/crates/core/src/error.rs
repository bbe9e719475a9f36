use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar argument is outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two sampled objects that must share a grid or dimension do not.
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error(
        "no convergence after {levels} refinement levels (last two values {previous} and {last})"
    )]
    Convergence {
        levels: usize,
        previous: f64,
        last: f64,
    },

    /// Caller supplied an argument combination the operation does not accept.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("degenerate state: {0}")]
    Degenerate(String),

    /// Detection bits whose alias sets have no common point.
    #[error("inconsistent bits: alias sets have an empty intersection")]
    InconsistentBits,

    #[error("degenerate order: leading coefficient is zero")]
    DegenerateOrder,

    #[error("step {step} is too large for stable integration (spectral radius {spectral_radius})")]
    Unstable { step: f64, spectral_radius: f64 },

    #[error("operator is not Hermitian (max |H - H^dagger| = {0})")]
    NotHermitian(f64),

    #[error("grid too small: {points} points, at least {required} needed")]
    GridTooSmall { points: usize, required: usize },

    #[error("grid too coarse: refinement changed the result by {change}, tolerance {tolerance}")]
    GridTooCoarse { change: f64, tolerance: f64 },

    #[error("turning point: momentum vanishes at grid index {index} (q = {q})")]
    TurningPoint { index: usize, q: f64 },
}
