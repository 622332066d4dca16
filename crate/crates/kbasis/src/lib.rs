//! Cycle-space bases with bounded per-edge charge, for graphs and 1-plane
//! embeddings.
//!
//! The crate is organised around a small set of currencies: [`graph::Graph`]
//! is a labeled multigraph with stable edge ids, [`cycle_space::EdgeSet`] is a
//! GF(2) vector over those ids, and [`embedding::OnePlaneEmbedding`] is a
//! combinatorial (rotation-system) drawing in which every edge is crossed at
//! most once. On top of those, [`constructions`] builds bases with guaranteed
//! charge bounds, [`transforms`] carries bases through graph surgery,
//! [`search`] computes exact basis numbers at desk scale, and [`catalog`]
//! ships named graphs and transcribed drawings as machine-checkable fixtures.

#![forbid(unsafe_code)]

pub mod catalog;
pub mod constructions;
pub mod cycle_space;
pub mod dot;
pub mod embedding;
pub mod graph;
pub mod iso;
pub mod json;
pub mod search;
pub mod transforms;

use thiserror::Error;

/// Crate-wide error type. Domain verdicts that the spec treats as data
/// (`NotInSpan`, `Infeasible`, `NotPoppy`, ...) are modelled as `Ok` values,
/// not as variants here.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} does not exist")]
    NoSuchVertex(graph::VertexId),
    #[error("edge {0} does not exist")]
    NoSuchEdge(graph::EdgeId),
    #[error("edge set references edge ids outside the parent graph: {0:?}")]
    ForeignEdges(Vec<graph::EdgeId>),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not 2-connected")]
    NotTwoConnected,
    #[error("contracting a loop is undefined (edge {0})")]
    LoopContraction(graph::EdgeId),
    #[error("invalid vertex split partition: {0}")]
    InvalidSplit(String),
    #[error("not a spanning forest of this graph: {0}")]
    MismatchedForest(String),
    #[error("set does not generate the cycle space (rank {rank}, betti {betti})")]
    NotGenerating { rank: usize, betti: usize },
    #[error("not a valid basis: {0}")]
    InvalidBasis(String),
    #[error("cycle space too large: 2^{betti} exceeds cap {cap}")]
    CapExceeded { betti: usize, cap: u64 },
    #[error("embedding is invalid: {0:?}")]
    InvalidEmbedding(Vec<embedding::Violation>),
    #[error("not a dummy vertex: {0}")]
    NotADummy(graph::VertexId),
    #[error("operation requires a plane embedding (no crossings)")]
    NotPlane,
    #[error("skeleton is disconnected")]
    DisconnectedSkeleton,
    #[error("embedding is not full-crossing")]
    NotFullCrossing,
    #[error("embedding is not poppy")]
    NotPoppy,
    #[error("crossing {0} is not locally maximal")]
    NotLocallyMaximal(graph::VertexId),
    #[error("invalid charge assignment: {0}")]
    InvalidAssignment(String),
    #[error("no balanced orientation supplied or orientation invalid: {0}")]
    InvalidOrientation(String),
    #[error("tree packing infeasible: {0}")]
    PackingInfeasible(String),
    #[error("union cover precondition violated: {0}")]
    UnionCover(String),
    #[error("terminal graph invalid: {0}")]
    InvalidTerminalGraph(String),
    #[error("augmented basis invalid: {0}")]
    InvalidAugmentedBasis(String),
    #[error("expected {expected} st-paths matching the charge of the replaced edge, got {got}")]
    PathCountMismatch { expected: usize, got: usize },
    #[error("crossing schedule inconsistent: {0}")]
    InvalidSchedule(String),
    #[error("search budget exceeded ({0})")]
    BudgetExceeded(String),
    #[error("size cutoff exceeded: {0}")]
    CutoffExceeded(String),
    #[error("graph has no cycle")]
    Forest,
    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),
    #[error("invalid contraction chain: {0}")]
    InvalidChain(String),
    #[error("unknown catalog entry: {0}")]
    UnknownEntry(String),
    #[error("catalog fixture corrupt: {0}")]
    FixtureCorrupt(String),
    #[error("construction postcondition failed: {0}")]
    PostconditionFailed(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
