use thiserror::Error;

/// Errors raised by the exact algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element has zero quadratic norm and is not invertible")]
    NonInvertible,

    #[error("division by zero")]
    DivisionByZero,

    #[error("evaluation on the null cone N(Z) = 0 of a function with a pole there")]
    PoleAtNullCone,

    #[error("homogeneous piece of degree {degree} is annihilated by (deg{shift:+})")]
    ResonantDegree { degree: i64, shift: i64 },

    #[error("slot {slot} out of range for tensor rank {rank}")]
    SlotOutOfRange { slot: usize, rank: usize },

    #[error("slot operator needs two distinct slots, got {0} twice")]
    RepeatedSlot(usize),

    #[error("tensor rank {0} outside the supported range 1..={max}", max = crate::tensor::MAX_RANK)]
    RankOutOfRange(usize),

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("side mismatch: expected {expected}")]
    SideMismatch { expected: &'static str },

    #[error("basis index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("function of degree {degree} is not captured by an expansion truncated at 2l = {twice_lmax}")]
    TruncationInsufficient { degree: i64, twice_lmax: i64 },

    #[error("result leaves the Laurent class P(Z) N(Z)^-k: {0}")]
    NotLaurentClass(String),

    #[error("unsupported evaluation point: {0}")]
    BadPoint(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
