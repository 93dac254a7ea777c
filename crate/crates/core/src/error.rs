use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("binomial exponent must be finite, got {0}")]
    NonFiniteExponent(f64),
    #[error("eigenfunction index m must be at least 1")]
    InvalidEigenIndex,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormError {
    #[error("invalid space parameters: {0}")]
    InvalidSpace(String),
    #[error("invalid quadrature parameters: {0}")]
    InvalidQuadrature(String),
    #[error(
        "quadrature did not converge after {refinements} refinements \
         (last value {last}, relative change {rel_change:e})"
    )]
    NonConvergedQuadrature {
        last: f64,
        rel_change: f64,
        refinements: u32,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("grid point {re} + {im}i lies within {band:e} of a spectral boundary")]
    BoundaryTooClose { re: f64, im: f64, band: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScanError {
    #[error("invalid scan parameters: {0}")]
    InvalidParameters(String),
    #[error("epsilon {epsilon} must lie in (0, 1) with p >= 1 + 2 epsilon (p = {p})")]
    InvalidEpsilon { epsilon: f64, p: f64 },
    #[error("eigenfunction residual {residual:e} for m = {m} exceeds tolerance")]
    EigenResidual { m: u32, residual: f64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Norm(#[from] NormError),
}
