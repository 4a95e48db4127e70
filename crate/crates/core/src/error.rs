use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("line {line}: self-loop on node {label}")]
    SelfLoop { line: usize, label: String },

    #[error("line {line}: weight must be positive, got {weight}")]
    NonPositiveWeight { line: usize, weight: String },

    #[error("unknown node label {0:?}")]
    UnknownLabel(String),

    #[error("no link between {0} and {1}")]
    UnknownLink(String, String),

    #[error("node set has zero internal degree; psi is undefined")]
    ZeroInternalDegree,

    #[error("node {0} is not a neighbour of the subgraph")]
    NotANeighbor(String),

    #[error("node {0} is not a member of the subgraph")]
    NotAMember(String),

    #[error("subgraph has no frontier: it already spans its component")]
    NoFrontier,

    #[error("graph is disconnected ({components} components)")]
    DisconnectedGraph { components: usize },

    #[error("graph carries non-unit link weights; the line-graph construction needs a binary incidence matrix")]
    WeightedUnsupported,

    #[error("link set has zero total degree in the line graph")]
    EmptyCut,

    #[error("graph has {n} nodes, above the enumeration cap of {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("jaccard distance of two empty sets")]
    EmptyUnion,

    #[error("no community with a lower psi")]
    NoLowerCommunity,

    #[error("cannot start worker pool: {0}")]
    ThreadPool(String),

    #[error("seed run oscillates: {0}")]
    Oscillation(String),
}
