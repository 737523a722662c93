use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group must have at least one element")]
    Empty,
    #[error("product table has {found} entries, expected {expected}")]
    BadShape { expected: usize, found: usize },
    #[error("product table entry {0} is out of range")]
    OutOfRange(usize),
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("subset is not closed under the product")]
    NotClosed,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("isomorphism search exceeded {0} nodes")]
    BoundExceeded(usize),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CosetError {
    #[error("coset table exceeded {0} cosets")]
    CapacityExceeded(usize),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}
