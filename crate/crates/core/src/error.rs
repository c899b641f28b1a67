use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("variable x{index} out of range (declared {declared} variables)")]
    VariableRange { index: usize, declared: usize },

    #[error("degree {found} not supported here: {context}")]
    Degree { found: usize, context: &'static str },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("{which} is numerically singular (smallest singular value {smin:e})")]
    Singular { which: &'static str, smin: f64 },

    #[error("retained columns are rank deficient (smallest singular value {smin:e})")]
    RankDeficient { smin: f64 },

    #[error("no hits on any rung; tail exponent undefined")]
    EmptyTail,

    #[error("linear algebra backend failure: {0}")]
    Backend(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Whether the failure originates in the numerical backend rather than
    /// in user input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Backend(_) | Error::Singular { .. } | Error::RankDeficient { .. }
        )
    }
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Backend(e.to_string())
    }
}
