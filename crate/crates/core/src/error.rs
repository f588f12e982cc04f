use core::fmt;

/// Errors produced by the numerical kernels and the check catalog.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A matrix failed the Hermitian test `||H - H*||_F <= 1e-10 max(1, ||H||_F)`.
    NotHermitian { deviation: f64 },
    /// A Hermitian matrix had an eigenvalue below the PSD tolerance.
    NotPsd { min_eigenvalue: f64 },
    /// The Hermitian part of the operator is not positive definite.
    NotAccretive { min_eigenvalue: f64 },
    /// Entries must be finite and the buffer must be `dim * dim` long.
    InvalidMatrix(&'static str),
    /// Operands of a binary operation have different dimensions.
    DimensionMismatch { left: usize, right: usize },
    /// Weights live in `[0, 1]`.
    InvalidWeight(f64),
    InvalidTolerance(f64),
    /// An argument violated a documented precondition.
    InvalidArgument(&'static str),
    /// An iterative method ran out of its evaluation budget.
    NonConvergence { evaluations: usize },
    /// Adaptive quadrature hit its recursion limit before meeting the tolerance.
    DepthExceeded { depth: u32 },
    IndexOutOfRange { index: usize, count: usize },
    UnknownCheckId,
    MissingParameter(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotHermitian { deviation } => {
                write!(f, "matrix is not Hermitian (relative deviation {deviation:e})")
            }
            Error::NotPsd { min_eigenvalue } => {
                write!(f, "matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")
            }
            Error::NotAccretive { min_eigenvalue } => write!(
                f,
                "operator is not accretive (min eigenvalue of real part {min_eigenvalue:e})"
            ),
            Error::InvalidMatrix(why) => write!(f, "invalid matrix: {why}"),
            Error::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            Error::InvalidWeight(t) => write!(f, "weight {t} is outside [0, 1]"),
            Error::InvalidTolerance(tol) => write!(f, "tolerance must be positive, got {tol}"),
            Error::InvalidArgument(why) => write!(f, "invalid argument: {why}"),
            Error::NonConvergence { evaluations } => {
                write!(f, "no convergence within {evaluations} evaluations")
            }
            Error::DepthExceeded { depth } => {
                write!(f, "adaptive quadrature exceeded recursion depth {depth}")
            }
            Error::IndexOutOfRange { index, count } => {
                write!(f, "sample index {index} out of range for count {count}")
            }
            Error::UnknownCheckId => f.write_str("unknown check id"),
            Error::MissingParameter(name) => write!(f, "missing parameter `{name}`"),
        }
    }
}

impl core::error::Error for Error {}
