use thiserror::Error;

/// Errors produced by the poset, complex and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cover relation contains a cycle through elements {0} and {1}")]
    CycleDetected(usize, usize),

    #[error("element index {index} out of range for a poset of {len} elements")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("the given elements have no common upper bound")]
    NoUpperBound,

    #[error("the given elements have no common lower bound")]
    NoLowerBound,

    #[error("bound is not unique; candidates {0:?}")]
    NotUnique(Vec<usize>),

    #[error("elements {0} and {1} are not comparable")]
    NotComparable(usize, usize),

    #[error("resource limit exceeded: {what} needs {needed}, limit is {limit}")]
    ResourceLimit {
        what: &'static str,
        needed: String,
        limit: usize,
    },

    #[error("face {0:?} is not present in the complex")]
    FaceNotPresent(Vec<usize>),

    #[error("family is not nested: {0}")]
    NotNested(String),

    #[error("sequence is not a linear extension: {0}")]
    NotLinearExtension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn resource_limit(what: &'static str, needed: impl ToString, limit: usize) -> Error {
    Error::ResourceLimit {
        what,
        needed: needed.to_string(),
        limit,
    }
}
