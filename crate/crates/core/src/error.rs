use thiserror::Error;

use crate::hypergraph::VertexId;
use crate::topology::SegmentId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex set must be nonempty")]
    EmptyVertexSet,
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("invalid edge: {0}")]
    InvalidEdge(String),
    #[error("separator must be a nonempty proper subset of the vertex set")]
    NotProperSubset,
    #[error("operation needs at least {needed} vertices, hypergraph has {found}")]
    TooFewVertices { needed: usize, found: usize },
    #[error(
        "brute-force min-cut supports at most {limit} vertices (got {found}) and the hypergraph is not a quasi-tree"
    )]
    TooLargeForBruteForce { limit: usize, found: usize },
    #[error("hypergraph is disconnected")]
    Disconnected,
    #[error("hypergraph is not a quasi-tree")]
    NotQuasiTree,
    #[error("{0} segment(s) are held by a single user, by every user, or by nobody")]
    Leftovers(usize),
    #[error("segment {0} is held by no user")]
    UncoveredSegment(SegmentId),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid sender {0}")]
    InvalidSender(VertexId),
    #[error("invalid segment {0}")]
    InvalidSegment(SegmentId),
    #[error("placement does not match the hypergraph: {0}")]
    PlacementMismatch(String),
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("gave up after {0} attempts")]
    RetryBudgetExhausted(usize),
    #[error("payload length {length} must exceed the segment count {segments}")]
    PayloadTooShort { length: usize, segments: usize },
    #[error("segment count {found} exceeds the simulator limit {limit}")]
    TooManySegments { limit: usize, found: usize },
    #[error("invalid holding positions: {0}")]
    InvalidPositions(String),
    #[error("coding matrix needs m <= n (got n = {n}, m = {m})")]
    VandermondeShape { n: usize, m: usize },
    #[error("malformed schedule: {0}")]
    MalformedSchedule(String),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
