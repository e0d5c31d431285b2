use thiserror::Error;

/// Errors produced by parameter validation, solvers and estimators.
///
/// Numeric payloads are carried as `f64` regardless of the working scalar
/// type; they are diagnostic only.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Drift matrix singular; with a positive atomic decay rate this cannot
    /// happen, so it signals a degenerate generator (gamma = 0).
    #[error("degenerate generator: drift matrix is singular")]
    DegenerateGenerator,

    #[error("frequency grid is empty")]
    EmptyGrid,

    #[error("frequency grid is not strictly increasing at index {index}")]
    GridNotIncreasing { index: usize },

    #[error("grid/value length mismatch: {grid} grid points, {values} values")]
    LengthMismatch { grid: usize, values: usize },

    #[error("time step {dt} violates the bound dt <= {bound} (no sub-stepping is performed)")]
    StepSizeViolation { dt: f64, bound: f64 },

    #[error("unsupported: kappa = 0 with D > 0 means an infinitely correlated stochastic field")]
    InfiniteCorrelationTime,

    #[error("Bloch vector norm {norm} exceeded 1 + {tol} at step {step}")]
    NormBlowup { norm: f64, tol: f64, step: usize },

    #[error("trajectory {index}: {source}")]
    Trajectory {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(
        "peak near omega = {position} under-resolved: {points} samples above half maximum (need >= {need})"
    )]
    PeakUnderResolved {
        position: f64,
        points: usize,
        need: usize,
    },

    #[error("peak near omega = {position}: half-height crossing falls outside the sampled grid")]
    PeakCrossingOutOfRange { position: f64 },

    #[error("decay fit degenerate: {0}")]
    FitDegenerate(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
