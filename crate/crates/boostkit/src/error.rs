use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported gamma-matrix representation `{0}` (supported: dirac)")]
    UnsupportedRepresentation(String),

    #[error("invalid particle: {0}")]
    InvalidParticle(String),

    #[error("invalid particle system: {0}")]
    InvalidSystem(String),

    #[error("moment relation is not well posed: {0}")]
    IllPosedRelation(String),

    #[error("field point at distance {distance} lies inside the admissible source region (radius {limit})")]
    FieldPointTooClose { distance: f64, limit: f64 },

    #[error("field point coincides with a source point")]
    CoincidentPoint,

    #[error("inconsistent field configuration: {0}")]
    InconsistentField(String),

    #[error("non-uniform electric field: {0}")]
    NonUniformField(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("Wilson parameter r = {0} outside (0, 1]")]
    InvalidWilson(f64),

    #[error("time-dependent field configuration not supported here")]
    TimeDependentField,

    #[error("relativistic regime: well depth {depth} >= m/2 = {limit}")]
    RelativisticRegime { depth: f64, limit: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("eigensolver did not converge")]
    Eigensolver,

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit code: 2 for unreadable or invalid scenarios, 1 for
    /// failures during computation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::InvalidScenario(_) => 2,
            _ => 1,
        }
    }
}
