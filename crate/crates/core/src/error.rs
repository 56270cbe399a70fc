use thiserror::Error;

use crate::tree::Label;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("invalid label subset: {0}")]
    InvalidSubset(String),
    #[error("unknown label {0}")]
    UnknownLabel(Label),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("k = {k} is out of range for n = {n}")]
    KOutOfRange { k: u32, n: u32 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("family has the wrong classification: {0}")]
    Classification(String),
    #[error("family is not treelike: {0}")]
    NotTreelike(String),
    #[error("coordinates outside the moduli simplex: {0}")]
    Membership(String),
    #[error("invalid rewrite: {0}")]
    InvalidRewrite(String),
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit status: 2 for unreadable or malformed input, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Io(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
