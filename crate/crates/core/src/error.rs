use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid function length {found} does not match grid size {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("non-finite value {value} at node {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("{scheme} needs at least {required} nodes, grid has {found}")]
    GridTooSmall {
        scheme: &'static str,
        required: usize,
        found: usize,
    },

    #[error("matrix is singular to working precision (pivot {pivot:e} at row {row})")]
    Singular { row: usize, pivot: f64 },

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("time step {step} failed: {source}")]
    StepFailed {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("scheme {scheme} does not preserve conservation law {law}")]
    LawNotPreserved { scheme: &'static str, law: u8 },

    #[error("no interior maximum in search window [{lo}, {hi}]")]
    NoPeak { lo: f64, hi: f64 },

    #[error("exact solution has zero norm")]
    ZeroNorm,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("every parameter value in the sweep failed")]
    SweepFailed,
}
