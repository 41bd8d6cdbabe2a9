use crate::arena::NodeRef;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("node {0} is not a unary node")]
    NotUnary(NodeRef),

    #[error("node {0} is not a leaf")]
    NotLeaf(NodeRef),

    #[error("node {0} is the root and has no parent")]
    IsRoot(NodeRef),

    #[error("parent of node {0} is not a binary node")]
    ParentNotBinary(NodeRef),

    #[error("node {0} is not a live node of this tree")]
    DeadNode(NodeRef),

    #[error("malformed tree word at position {position}: {reason}")]
    MalformedWord { position: usize, reason: String },

    #[error("point {point} does not match the arity of its node")]
    PointMismatch { point: String },

    #[error("operation requires a tree of at least {min} nodes, got {got}")]
    TreeTooSmall { min: usize, got: usize },

    #[error("operation {op} cannot be applied to {anchor}")]
    WrongAnchor { op: &'static str, anchor: String },

    #[error("invalid size {size}: {reason}")]
    InvalidSize { size: usize, reason: &'static str },

    #[error("size {requested} exceeds the limit of {limit}")]
    SizeCapExceeded { requested: usize, limit: usize },

    #[error("invalid unary weight: {0}")]
    InvalidWeight(String),

    #[error("unary weight {0} is too large for a positive step factor at this precision")]
    WeightTooLarge(String),

    #[error("invalid dyadic distribution: {0}")]
    InvalidDistribution(String),

    #[error("class {class} expects {expected:.3} samples, fewer than 5")]
    UnderSampled { class: String, expected: f64 },

    #[error("observed class {0} is not in the expected table")]
    UnknownClass(String),

    #[error("tree invariant violated: {0}")]
    Invariant(String),
}
