use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("scaling factor kappa = {0} must exceed -1")]
    KappaOutOfRange(f64),

    #[error("degenerate sample: speed below the {floor} m/s floor")]
    DegenerateSample { floor: f64 },

    #[error("direction undefined at ({y}, {z}): reshaped field vanishes")]
    DegenerateDirection { y: f64, z: f64 },

    #[error("reference path did not reach the goal within {steps} steps")]
    NoConvergence { steps: usize },

    #[error("path too short for resampling: arc length {length} m")]
    PathTooShort { length: f64 },

    #[error("kernel matrix is not positive definite ({points} points)")]
    SingularKernel { points: usize },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
