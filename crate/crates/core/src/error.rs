use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid numeration system: {0}")]
    InvalidSystem(String),

    #[error("digit {digit} at position {position} does not fit the alphabet bound {bound}")]
    InconsistentAlphabet { digit: String, position: usize, bound: u32 },

    #[error("modulus must be at least {min}, got {m}")]
    InvalidModulus { m: u64, min: u64 },

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("inadmissible directive sequence: shift {shift} is lexicographically greater than the sequence")]
    InadmissibleDirective { shift: usize },

    #[error("invalid directive sequence: {0}")]
    InvalidDirective(String),

    #[error("invalid word `{0}`")]
    InvalidWord(String),

    #[error("brute-force budget of {budget} exceeded ({size} tuples)")]
    BudgetExceeded { size: u128, budget: u128 },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("system definition: {0}")]
    Definition(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
