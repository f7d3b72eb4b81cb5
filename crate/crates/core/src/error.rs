use thiserror::Error;

/// Errors raised by the library. CLI exit codes are derived from
/// [`KreinError::is_usage`].
#[derive(Debug, Error)]
pub enum KreinError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("space mismatch: expected {expected}, got {got}")]
    SpaceMismatch { expected: String, got: String },

    #[error("matrix is not symmetric: {0}")]
    NotSymmetric(String),

    #[error("shift {shift} is singular: eigenvalue {eigenvalue} leaves |eigenvalue + shift| = {gap:e}")]
    SingularShift { shift: f64, eigenvalue: f64, gap: f64 },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl KreinError {
    /// True for errors caused by malformed user input (bad files, bad
    /// parameters) rather than a failure while computing.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            KreinError::Parse(_)
                | KreinError::Config(_)
                | KreinError::NotSymmetric(_)
                | KreinError::Json(_)
                | KreinError::Parameter(_)
        )
    }

    /// Short machine-readable tag for single-line error reporting.
    pub fn kind(&self) -> &'static str {
        match self {
            KreinError::Dimension { .. } => "dimension",
            KreinError::InvalidPoint(_) => "invalid_point",
            KreinError::Parameter(_) => "parameter",
            KreinError::SpaceMismatch { .. } => "space_mismatch",
            KreinError::NotSymmetric(_) => "not_symmetric",
            KreinError::SingularShift { .. } => "singular_shift",
            KreinError::NoConvergence(_) => "no_convergence",
            KreinError::Numerical(_) => "numerical",
            KreinError::Empty(_) => "empty",
            KreinError::Parse(_) => "parse",
            KreinError::Config(_) => "config",
            KreinError::Json(_) => "json",
            KreinError::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, KreinError>;
