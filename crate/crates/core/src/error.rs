use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),

    /// A construction produced a labeling that failed self-verification,
    /// both as written and with the known correction applied.
    #[error("formula breakdown: {0}")]
    FormulaBreakdown(String),

    #[error("length mismatch: expected {expected} labels, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("graph too large: {size} exceeds limit {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("graph is not bipartite")]
    NotBipartite,

    #[error("graph is not connected")]
    NotConnected,

    #[error("graph has a K2 component")]
    K2Component,

    /// The new join vertices would share a weight with an old vertex.
    #[error("weight collision: join weight {weight} equals the shifted weight of vertex {vertex}")]
    WeightCollision { weight: u64, vertex: usize },

    #[error("no valid labeling found within {0} iterations")]
    NoValidLabelingFound(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
