use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a polygonal chain needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("stretch factor undefined: first and last vertex coincide")]
    ZeroBaseline,
    #[error("invalid triple ({i}, {j}, {k}) for a chain with {n} vertices")]
    Index {
        i: usize,
        j: usize,
        k: usize,
        n: usize,
    },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParams(msg.into()))
}
