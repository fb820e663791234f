use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("order relation has a cycle through {0} and {1}")]
    Cycle(usize, usize),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("index {index} out of range for {len} elements")]
    Index { index: usize, len: usize },
    #[error("element {0} is not below every other element")]
    NotBottom(usize),
    #[error("map is not an embedding: {0}")]
    NotEmbedding(String),
    #[error("poset is not embeddable: {0}")]
    NotEmbeddable(String),
    #[error("poset has no bottom element")]
    NoBottom,
    #[error("set {0:?} is not contained in any label")]
    NotInClosure(Vec<usize>),
    #[error("map is not monotone: f({lower:?}) is not a subset of f({upper:?})")]
    Monotonicity {
        lower: Vec<usize>,
        upper: Vec<usize>,
    },
    #[error("map is not a reduction: {0}")]
    NotReduction(String),
    #[error("supremum undefined: {0}")]
    Supremum(String),
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("universe of size {0} is too large (limit {1})")]
    UniverseTooLarge(usize, usize),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("move not allowed in phase {0}")]
    Phase(&'static str),
    #[error("game is not finished")]
    NotFinished,
    #[error("invalid strategy: {0}")]
    Strategy(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn check_index(index: usize, len: usize) -> Result<()> {
    if index < len {
        Ok(())
    } else {
        Err(Error::Index { index, len })
    }
}
