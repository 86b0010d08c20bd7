use thiserror::Error;

/// Errors produced anywhere in the discretization pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid boundary conditions: {0}")]
    InvalidBoundary(String),

    #[error("boundary condition rows are linearly dependent at degree {n}")]
    DegenerateBoundary { n: usize },

    #[error("exponent {name} = {value} must be < 1")]
    InvalidExponent { name: &'static str, value: f64 },

    #[error("length mismatch: {what} has {got} entries, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("chebyshev fit did not converge by degree {max_degree}; input is not analytic on [-1, 1]")]
    FitNotConverged { max_degree: usize },

    #[error("invalid potential term: {0}")]
    InvalidTerm(String),

    #[error("unknown builtin function `{0}`")]
    UnknownBuiltin(String),

    #[error("basis size N = {0} is too small (need N >= 4)")]
    SizeTooSmall(usize),

    #[error("symmetric split not applicable: {0}")]
    NotSymmetric(String),

    #[error("mass matrix is not positive definite (Cholesky failed)")]
    NotPositiveDefinite,

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("eigenpair {k} has relative residual {residual:e} above tolerance")]
    Residual { k: usize, residual: f64 },

    #[error("requested {requested} eigenpairs from a system of size {size}")]
    TooManyEigenpairs { requested: usize, size: usize },

    #[error("hat endpoint value vanishes for eigenpair {k}; spurious mode or wrong endpoint flags")]
    VanishingEndpoint { k: usize },

    #[error("potential is bounded at both endpoints; no correction is defined")]
    BoundedPotential,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
