use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero vector at index {index}")]
    ZeroVector { index: usize },

    #[error("matrix has {rows} rows but {cols} columns; rows >= cols is required")]
    TooFewRows { rows: usize, cols: usize },

    #[error("matrix is rank deficient at column {column}")]
    RankDeficient { column: usize },

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not unitary (||U^dag U - I|| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("singular diagonal entry at index {index}")]
    SingularDiagonal { index: usize },

    #[error("post-selected outcome {bit} has probability {probability:e}")]
    ImpossibleOutcome { bit: u8, probability: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("basis vector {index} is not unit norm (norm {norm})")]
    NonUnitBasis { index: usize, norm: f64 },

    #[error("potential is singular at ({x}, {y})")]
    Singularity { x: f64, y: f64 },

    #[error("QR iteration did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("solution residual {residual:e} exceeds bound {bound:e}")]
    InaccurateSolution { residual: f64, bound: f64 },

    #[error("linear system has no unique solution")]
    NoUniqueSolution,

    #[error("malformed matrix file: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
