//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("signature error: {0}")]
    Signature(String),
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not a join/meet decomposition: {0}")]
    NotAJoin(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("element {0} has no complement")]
    NotComplemented(usize),
    #[error("assignment set of world {world} is not closed: x={assignment:?} composed with tau={tau:?} leaves it")]
    Closure {
        world: String,
        assignment: Vec<usize>,
        tau: Vec<usize>,
    },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("no generic point: {0}")]
    NoGenericPoint(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by exceeding a configured size bound.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }
}
