use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size {0} is not a power of two >= 8")]
    InvalidGrid(usize),

    #[error("grid mismatch: {left} vs {right} points per dimension")]
    GridMismatch { left: usize, right: usize },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("field has nonzero mean where a zero-mean field is required")]
    NonzeroMean,

    #[error("symbol |xi|^{power} is singular at xi = 0 for a field with nonzero mean")]
    SingularSymbol { power: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("spectral support violation: {0}")]
    SupportViolation(String),

    #[error("requested band {band} exceeds the dealiasing cutoff {cutoff}")]
    BandTooHigh { band: usize, cutoff: usize },

    #[error("dilated spectrum exceeds resolution: mode {mode} maps beyond cutoff {cutoff}")]
    Resolution { mode: i64, cutoff: usize },

    #[error("simulation aborted at t = {t}: {reason}")]
    Aborted { t: f64, reason: String },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
