use thiserror::Error;

use crate::network::{CircleId, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex `{vertex}` is not a member of circle `{circle}`")]
    NotAMember { vertex: VertexId, circle: CircleId },

    #[error("detachment #{index} ({vertex}, {circle}) is not valid: vertex is not a member")]
    InvalidDetachment {
        index: usize,
        vertex: VertexId,
        circle: CircleId,
    },

    #[error("unknown circle `{0}`")]
    UnknownCircle(CircleId),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(VertexId),

    #[error("no weight for induced edge ({0}, {1})")]
    MissingWeight(VertexId, VertexId),

    #[error("weight {w} for ({u}, {v}) is outside [0, 1]")]
    InvalidWeight { u: VertexId, v: VertexId, w: f64 },

    #[error("invalid source distribution: {0}")]
    InvalidDistribution(String),

    #[error("instance too large for exhaustive evaluation: {0}")]
    TooLarge(String),

    #[error("no detachment candidates left after {completed} of {requested} steps")]
    NoCandidates { completed: usize, requested: usize },

    #[error("the bridge-block network has no bridges")]
    NoBridges,

    #[error("terminal circles `{0}` and `{1}` are not connected in the bridge-block network")]
    DisconnectedTerminals(CircleId, CircleId),

    #[error("infeasible generator targets: {0}")]
    InfeasibleTargets(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("min-cut detachments failed to separate `{0}` from `{1}`")]
    CutNotSeparating(CircleId, CircleId),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Whether the failure came from reading or writing files rather than
    /// from the inputs themselves.
    pub fn is_io(&self) -> bool {
        match self {
            Error::Io(_) => true,
            Error::Csv(e) => matches!(e.kind(), csv::ErrorKind::Io(_)),
            Error::Json(e) => e.is_io(),
            _ => false,
        }
    }

    /// Whether the failure is a malformed input file or value.
    pub fn is_malformed_input(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::InvalidWeight { .. }
                | Error::MissingWeight(..)
                | Error::InvalidDistribution(_)
        ) || matches!(self, Error::Json(e) if !e.is_io())
            || matches!(self, Error::Csv(e) if !matches!(e.kind(), csv::ErrorKind::Io(_)))
    }
}
