//! Error type shared by all modules.

/// Everything that can go wrong when constructing or verifying.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch for {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("{what} = {got} out of range (allowed: {allowed})")]
    OutOfRange {
        what: &'static str,
        got: i64,
        allowed: &'static str,
    },

    #[error("matrix is not Hermitian: max |M - M*| = {deviation:.3e} exceeds {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("not a permutation of 0..{n}: {perm:?}")]
    InvalidPermutation { n: usize, perm: Vec<usize> },

    #[error("wrong family kind: operation requires the {required} family")]
    WrongFamilyKind { required: &'static str },

    #[error("size cap exceeded for {what}: {got} > {cap}")]
    SizeCap {
        what: &'static str,
        got: u64,
        cap: u64,
    },

    #[error("effects for input {mu} of party {party} do not sum to identity (deviation {deviation:.3e})")]
    IncompletePovm {
        party: usize,
        mu: usize,
        deviation: f64,
    },

    #[error("correlation tables are not comparable: {0}")]
    TableMismatch(String),

    #[error("delta precondition violated: measured l1 distance {measured:.6e} exceeds declared delta {declared:.6e}")]
    DeltaPrecondition { measured: f64, declared: f64 },

    #[error("no feasible epsilon' > 0 for epsilon = {epsilon:.6e}: binding constraint is {binding}")]
    InfeasibleBudget { epsilon: f64, binding: &'static str },

    #[error("state is not supported here: {0}")]
    UnsupportedState(&'static str),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("linear program failed: {0}")]
    LinearProgram(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
