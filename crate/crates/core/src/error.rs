use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field error: {0}")]
    Field(String),
    #[error("group error: {0}")]
    Group(String),
    #[error("{what}: {size} elements exceeds the cap of {cap}")]
    CapExceeded { what: String, size: u128, cap: u128 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("missing irreducibility evidence: {0}")]
    Evidence(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
