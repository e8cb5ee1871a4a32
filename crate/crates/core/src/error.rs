use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("hypergraph has no hyperedges")]
    EmptyHypergraph,

    /// Some edge of the graph lies in no d-clique, so nothing projects onto it.
    #[error("graph is not the projection of any {d}-uniform hypergraph: edge {{{u}, {v}}} lies in no {d}-clique")]
    NotAProjection { d: usize, u: u32, v: u32 },

    #[error("weighted graph is not the weighted projection of any {d}-uniform hypergraph")]
    NotAWeightedProjection { d: usize },

    #[error("search budget of {budget} nodes exhausted on a component with {cliques} cliques and {pairs} edges")]
    Budget {
        budget: u64,
        cliques: usize,
        pairs: usize,
    },

    #[error("instance too large for exhaustive enumeration: {0}")]
    TooLarge(String),

    #[error("graph has zero probability under the model")]
    ZeroEvidence,

    #[error("formula not valid in this regime: {0}")]
    Regime(String),
}

impl Error {
    /// Resource exhaustion, as opposed to invalid input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Budget { .. } | Error::TooLarge(_))
    }
}
