use thiserror::Error;

use crate::construct::SharedFactor;
use crate::graph6::Graph6Error;
use crate::verify::Certificate;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for a graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error(transparent)]
    Graph6(#[from] Graph6Error),
    #[error("line {line}: {source}")]
    Parse { line: usize, source: Graph6Error },

    #[error("graph is disconnected; Cartesian prime factorization needs a connected graph")]
    Disconnected,
    #[error("the one-vertex graph has no prime factorization")]
    TrivialGraph,
    #[error("order {order} exceeds the canonical-form cap of {cap}")]
    SizeCap { order: usize, cap: usize },
    #[error("internal error: factorization of {graph} does not reassemble to the input")]
    FactorizationMismatch { graph: String },
    #[error("symmetric eigenvalue iteration failed to converge")]
    EigenFailure,

    #[error("family is empty")]
    EmptyFamily,
    #[error("family has not been verified")]
    UnverifiedFamily,
    #[error("families use different spectrum kinds")]
    KindMismatch,
    #[error("the two families share a spectrum ({0})")]
    CrossSpectraNotDistinct(String),
    #[error("none of conditions 1-3 holds; shared prime factors: {}", fmt_shared(.shared))]
    NoConditionHolds { shared: Vec<SharedFactor> },
    #[error("G[{g_index}] and H[{h_index}] are not coprime: both contain prime factor {factor}")]
    NotCoprime { g_index: usize, h_index: usize, factor: String },
    #[error("U[{first}] and U[{second}] are not coprime: both contain prime factor {factor}")]
    NotPairwiseCoprime { first: usize, second: usize, factor: String },
    #[error("index {index} out of range for a family of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("power k must be at least 1")]
    InvalidPower,
    #[error("constructed family failed verification")]
    VerificationFailed(Box<Certificate>),

    #[error("corpus generation supports at most 8 vertices, got {0}")]
    CorpusTooLarge(usize),
    #[error("{count} graphs exceed the triplet enumeration cap of {cap}")]
    TooManyGraphs { count: usize, cap: usize },
}

fn fmt_shared(shared: &[SharedFactor]) -> String {
    shared
        .iter()
        .map(|s| format!("G[{}]/H[{}] share {}", s.g_index, s.h_index, s.factor))
        .collect::<Vec<_>>()
        .join("; ")
}
