use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    #[error("simplex iteration limit ({0}) reached")]
    IterationLimit(usize),

    #[error("malformed linear program: {0}")]
    MalformedProgram(String),

    #[error("no threshold candidates: every input dimension is constant")]
    DegenerateData,

    #[error("{labels} labels exceed the subset-constraint cap of {cap}")]
    TooManyLabels { labels: usize, cap: usize },

    #[error("the uncertainty set is empty (learning problem unbounded below)")]
    UncertaintySetEmpty,

    #[error("too few samples: {samples} samples for {folds} folds")]
    TooFewSamples { samples: usize, folds: usize },

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error("missing value at row {row}, column {column}")]
    MissingValue { row: usize, column: String },

    #[error("unsupported model schema version {found} (expected {expected})")]
    SchemaMismatch { found: String, expected: u32 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors raised by the optimization layer rather than by the input data.
    pub fn is_solver_error(&self) -> bool {
        matches!(
            self,
            Error::NumericalBreakdown(_)
                | Error::IterationLimit(_)
                | Error::MalformedProgram(_)
                | Error::UncertaintySetEmpty
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
