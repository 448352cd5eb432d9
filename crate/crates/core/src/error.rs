use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("symbol is not finite at spectral point {tuple:?}")]
    Domain { tuple: Vec<f64> },

    #[error(
        "axis {axis} has a zero eigenvalue in the retained spectrum; \
         condition (ATL), E_{{L_r}}({{0}}) = 0, fails (filter the spectrum or shift by +delta)"
    )]
    Atl { axis: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("divergence: {0}")]
    Divergence(String),

    #[error("unknown experiment `{name}`; available: {available}")]
    UnknownExperiment { name: String, available: String },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
