use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("enumeration needs {required} items, cap is {cap}")]
    CapExceeded { required: u128, cap: u128 },
    #[error("rank {m} exceeds min({n}, {l})")]
    BadRank { n: u32, l: u32, m: u32 },
    #[error("bad indices: {0}")]
    BadIndices(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("division is not exact in {0}")]
    NonIntegerResult(String),
    #[error("parameters outside the scope of this check: {0}")]
    OutOfScopeParams(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("set is not a Cameron-Liebler set")]
    NotCL,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
