use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("decision table has no rows")]
    EmptyTable,
    #[error("a table needs at least one attribute")]
    NoAttributes,
    #[error("duplicate tuple {0}")]
    DuplicateTuple(String),
    #[error("tuple has length {found}, expected {expected}")]
    BadDimension { expected: usize, found: usize },
    #[error("decision {0} is not a positive integer")]
    BadDecision(i64),
    #[error("unknown attribute {0}")]
    UnknownAttribute(usize),
    #[error("universe bound {bound} is too small, need at least {needed}")]
    UniverseTooSmall { bound: u64, needed: u64 },
    #[error("family has {available} attributes, {requested} requested")]
    TooFewAttributes { available: usize, requested: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("attribute {attr} out of range for a table with {n} columns")]
    AttributeOutOfRange { attr: usize, n: usize },
    #[error("system of equations has no solution among the table rows")]
    IncompatibleSystem,
    #[error("no decision for tuple {0}")]
    MissingDecision(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("inconsistent profile: {0}")]
    InconsistentProfile(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
