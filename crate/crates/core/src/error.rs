use thiserror::Error;

#[derive(Debug, Error)]
pub enum LandauError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("kernel singularity at z = 0 with epsilon = 0")]
    Singularity,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("instability at t = {t}: {detail}")]
    Instability { t: f64, detail: String },
    #[error("snapshot format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, LandauError>;
