use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive definite (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is singular")]
    Singular,

    #[error("map is not an involution (residual {residual:.3e})")]
    NotInvolution { residual: f64 },

    #[error("map is not antiunitary (residual {residual:.3e})")]
    NotAntiunitary { residual: f64 },

    #[error("modular relation J Δ J = Δ^-1 violated (residual {residual:.3e})")]
    InvalidModularRelation { residual: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("endomorphism family violates {0}")]
    InvariantViolation(String),

    #[error("projections do not form a resolution of the identity: {0}")]
    NotAResolution(String),

    #[error("operator {index} is not an endomorphism of the standard subspace (residual {residual:.3e})")]
    NotEndomorphism { index: usize, residual: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("derived evaluation does not define an involution: {0}")]
    InvolutionFailure(String),

    #[error("Q-system is not special (residual {residual:.3e})")]
    NotSpecial { residual: f64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape_err(expected: impl Into<String>, found: impl Into<String>) -> Error {
    Error::ShapeMismatch {
        expected: expected.into(),
        found: found.into(),
    }
}
