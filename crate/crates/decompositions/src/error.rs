use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecompError {
    #[error(transparent)]
    Core(#[from] qcut_core::CoreError),
    #[error("decomposition width {found} exceeds {allowed}")]
    WidthTooLarge { found: usize, allowed: usize },
    #[error("edge {0}->{1} is not covered by any bag")]
    UncoveredEdge(usize, usize),
    #[error("vertex {0} is in no bag")]
    UncoveredVertex(usize),
    #[error("bags containing vertex {0} are not connected")]
    Disconnected(usize),
    #[error("bag tree is malformed: {0}")]
    BadTree(String),
    #[error("graph needs at least three vertices, found {0}")]
    TooSmall(usize),
    #[error("vertices {0} and {1} are not mutually reachable")]
    NotStronglyConnected(usize, usize),
    #[error("child path {0} is not registered")]
    UnknownPath(usize),
    #[error("host is not canonical: child path {0} is neither tight nor slack")]
    NotCanonical(usize),
    #[error("shortest paths {0} and {1} intersect in more than one segment")]
    IntersectionNotPath(String, String),
    #[error("no complementary path from {from} to {to} for leaf hexagon {leaf}")]
    NoComplement { leaf: usize, from: usize, to: usize },
    #[error("cannot pad bag {0} to the required size")]
    CannotPad(usize),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
