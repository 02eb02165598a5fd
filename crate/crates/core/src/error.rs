use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("not a bijection on 1..={window}: {detail}")]
    NotABijection { window: usize, detail: String },
    #[error("simple transposition s_{index} out of range for window {window}")]
    IndexOutOfRange { index: usize, window: usize },
    #[error("pattern of size {pattern} is longer than permutation of size {window}")]
    PatternTooLong { pattern: usize, window: usize },
    #[error("window mismatch: {left} vs {right}")]
    WindowMismatch { left: usize, right: usize },
    #[error("grid size n = {0} is too small (need n >= 2)")]
    NTooSmall(usize),
    #[error("window {0} is too small (need window >= 3)")]
    WindowTooSmall(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("entry ({row},{col}) = {value} exceeds the ambient dimension {row}")]
    EntryExceedsAmbient {
        row: usize,
        col: usize,
        value: usize,
    },
    #[error("s_{0} decreases the length")]
    LengthDecrease(usize),
    #[error("{0} is not smooth (contains 4231 or 3412)")]
    NotSmooth(String),
    #[error("letter {letter} out of range for window {window}")]
    LetterOutOfRange { letter: usize, window: usize },
    #[error("letters at position {0} do not commute")]
    NotCommuting(usize),
    #[error("letters at position {0} do not form a braid")]
    NotABraid(usize),
    #[error("word does not evaluate to {0}")]
    WordDoesNotEvaluateToW(String),
    #[error("word is not reduced")]
    NotReduced,
    #[error("word is not geometrically compatible with {0}")]
    NotCompatible(String),
    #[error("no free vertex with value {value} available for letter k = {k}")]
    NoSuchFreeVertex { k: usize, value: usize },
    #[error("bad sandwich: {0}")]
    BadSandwich(String),
    #[error("{0} is not a supported prime field order")]
    UnsupportedField(u32),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
