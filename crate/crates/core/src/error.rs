use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("not a restricted-growth string: {0}")]
    NotCanonical(String),

    #[error("letter {letter} outside alphabet [1,{alphabet}]")]
    LetterOutOfRange { letter: u32, alphabet: u32 },

    #[error("words have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("pattern length {m} exceeds target length {n}")]
    PatternTooLong { m: usize, n: usize },

    #[error("invalid pattern set: {0}")]
    InvalidPatternSet(String),

    #[error("not a set partition: {0}")]
    NotAPartition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{space} search over {size} candidates exceeds the cap of {cap}; pass --unsafe-large to override")]
    CapExceeded { space: String, size: String, cap: u64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no sign change found for k = {k} on (0,1)")]
    NoBracket { k: u32 },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("thread pool: {0}")]
    ThreadPool(String),
}
