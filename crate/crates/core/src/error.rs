use thiserror::Error;

/// Errors raised by the library. Variants are named after the contract that failed.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero input where a nonzero value is required")]
    ZeroInput,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("map is not regular: the top-degree forms share a factor")]
    NotRegular,
    #[error("degree {0} is below 2")]
    DegreeTooLow(u32),
    #[error("bit-size cap of {0} bits exceeded")]
    BitSizeCap(u64),
    #[error("iteration cap reached: {0}")]
    IterationCap(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("root refinement failed: {0}")]
    Refinement(String),
    #[error("resonance: multiplier^{0} equals the multiplier")]
    Resonance(usize),
    #[error("contraction certificate failed: {0}")]
    Contraction(String),
    #[error("orbit left the polydisk of radius {0}")]
    LeftPolydisk(f64),
    #[error("point is not fixed: {0}")]
    NotFixed(String),
    #[error("fixed point is superattracting (multiplier 0)")]
    Superattracting,
    #[error("divisibility check failed: {0}")]
    Divisibility(String),
    #[error("elimination degenerated: {0}")]
    Elimination(String),
    #[error("prime factor too large for a machine word")]
    PrimeTooLarge,
}

pub type Result<T> = std::result::Result<T, Error>;
