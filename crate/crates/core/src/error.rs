use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("strand count mismatch: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("coefficient ring error: {0}")]
    Ring(String),
    #[error("entry is not an eligible isomorphism: {0}")]
    NotEliminable(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("requested degree is not certified by the truncation: {0}")]
    Uncertified(String),
    #[error("projector invariant violated: {0}")]
    ProjectorInvariant(String),
    #[error("inadmissible spin network: {0}")]
    Inadmissible(String),
    #[error("singular linear system: {0}")]
    Singular(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
