use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (relative deviation {deviation:e} exceeds {tolerance:e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {lambda_min:e})")]
    NotPositiveDefinite { lambda_min: f64 },

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("controller is not invertible (singular values {sigma_min:e} / {sigma_max:e})")]
    NotInvertibleController { sigma_min: f64, sigma_max: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("pair is not a bi-g-frame")]
    NotBiGFrame,

    #[error("coefficients do not synthesize the vector (residual {residual:e})")]
    ConstraintViolated { residual: f64 },

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("no full-rank draw after {attempts} attempts")]
    RetriesExhausted { attempts: usize },
}

pub type Result<T, E = FrameError> = std::result::Result<T, E>;
