use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not numerically Hermitian: max |M - M*| entry = {max_asym:e}")]
    NotNumericallyHermitian { max_asym: f64 },
    #[error("Jacobi eigensolver did not converge in {sweeps} sweeps: off-diagonal residual {residual:e}")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("eigenvalue {eigenvalue} lies outside the function domain [{lo}, {hi}]")]
    SpectrumOutsideDomain { eigenvalue: f64, lo: f64, hi: f64 },
    #[error("matrix is not positive definite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("parameter {name} out of range: {value}")]
    ParameterOutOfRange { name: &'static str, value: f64 },
    #[error("interval [{lo}, {hi}] is not contained in the domain of `{id}`")]
    DomainMismatch { id: String, lo: f64, hi: f64 },
    #[error("function `{id}` is not positive on the requested interval (f({at}) = {value})")]
    NonPositiveFunction { id: String, at: f64, value: f64 },
    #[error("degenerate interval: [{lo}, {hi}]")]
    DegenerateInterval { lo: f64, hi: f64 },
    #[error("non-finite sample at t = {at}")]
    NonFiniteSample { at: f64 },
    #[error("weight integrates to {total:e}; cannot normalize")]
    DegenerateWeight { total: f64 },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("function `{id}` has no usable derivative")]
    NotDifferentiable { id: String },
    #[error("unknown {kind} id `{id}`")]
    UnknownId { kind: &'static str, id: String },
    #[error("missing argument: {0}")]
    MissingArgument(&'static str),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
