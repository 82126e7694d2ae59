use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPsd { eigenvalue: f64 },
    #[error("matrix is singular (smallest singular value {sigma_min:.3e})")]
    Singular { sigma_min: f64 },
    #[error("weight is singular: smallest eigenvalue {lambda_min:.3e} vs largest {lambda_max:.3e}")]
    SingularWeight { lambda_min: f64, lambda_max: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid matrix dimension {0} (supported range 1..=64)")]
    InvalidDimension(usize),
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),
    #[error("state is invalid: {0}")]
    InvalidState(String),
    #[error("instance is missing role `{0}`")]
    MissingRole(String),
    #[error("Orlicz function `{0}` has no usable density")]
    NoDensity(String),
    #[error("negative input {0} where a nonnegative value is required")]
    NegativeInput(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown identifier `{0}`")]
    UnknownId(String),
    #[error("fixture mismatch on {quantity}: expected {expected}, computed {computed}")]
    FixtureMismatch {
        quantity: String,
        expected: f64,
        computed: f64,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
