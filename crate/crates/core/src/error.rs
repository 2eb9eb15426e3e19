use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate relationship between `{0}` and `{1}`")]
    DuplicatePair(String, String),

    #[error("self-loop on `{0}`: a person cannot have an affinity with themselves")]
    SelfLoop(String),

    #[error("unknown person `{0}`")]
    UnknownPerson(String),

    #[error("person `{0}` is listed more than once")]
    DuplicatePerson(String),

    #[error("table `{0}` is listed more than once")]
    DuplicateTable(String),

    #[error("guest list is empty")]
    EmptyGuestList,

    #[error("no tables were given")]
    NoTables,

    #[error("table `{0}` has capacity 0; every table needs at least one seat")]
    ZeroCapacity(String),

    #[error("infeasible seating: {people} people but only {capacity} seats")]
    Infeasible { people: usize, capacity: usize },

    #[error("vertex `{0}` has zero signed degree; split isolated vertices out first")]
    IsolatedVertex(String),

    #[error("every vertex is isolated; there is nothing to cluster")]
    AllIsolated,

    #[error("component query over an empty vertex subset")]
    EmptySubset,

    #[error("requested {k} eigenpairs of a {n}x{n} matrix")]
    TooManyClusters { k: usize, n: usize },

    #[error("matrix is not symmetric: entries ({row}, {col}) differ by {diff:e}")]
    NotSymmetric { row: usize, col: usize, diff: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("instance too large for exhaustive search: {k}^{n} assignments exceeds the limit of {limit}")]
    OracleTooLarge { k: usize, n: usize, limit: u64 },

    #[error("unknown relationship category `{0}` (expected keep_together, better_together, better_apart or keep_apart)")]
    UnknownCategory(String),

    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: u64,
        message: String,
    },

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }

    /// True when the input is well-formed but cannot be seated.
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::Infeasible { .. })
    }
}
