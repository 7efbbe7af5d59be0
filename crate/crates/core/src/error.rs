use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite coordinate at point {index}")]
    NonFiniteCoordinate { index: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("distance matrix has no positive entry to normalise by")]
    AllZeroMatrix,

    #[error("invalid distance matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("dice have different side counts ({0} vs {1})")]
    SideMismatch(usize, usize),

    #[error("invalid die {faces:?}: {reason}")]
    InvalidDie { faces: Vec<u32>, reason: String },

    #[error("{0} is only defined for 6-sided dice with faces in 1..=6")]
    UnsupportedDiceSpace(&'static str),

    #[error("no directed path between {from} and {to}")]
    Unreachable { from: String, to: String },

    #[error("graph has {nodes} nodes, over the exhaustive-search budget of {budget}; restrict to a smaller subgraph or raise the budget")]
    BudgetExceeded { nodes: usize, budget: usize },

    #[error("barcode is not normalised to [0, 1]")]
    NotNormalized,

    #[error("runs cover different point counts ({0} vs {1})")]
    PointCountMismatch(usize, usize),

    #[error("comparison needs at least two runs, got {0}")]
    TooFewRuns(usize),

    #[error("unknown metric `{0}`; valid: euclidean, taxicab, supremum, similarity, dice-euclidean, foliation-symmetry, shortest-path")]
    UnknownMetric(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
