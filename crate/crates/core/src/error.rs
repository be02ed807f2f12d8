use thiserror::Error;

use crate::markov::MarkovError;

#[derive(Debug, Error)]
pub enum KnockoutError {
    #[error("invalid shot parameters p={p}, q={q}: {reason}")]
    InvalidParams {
        p: f64,
        q: f64,
        reason: &'static str,
    },

    #[error("need at least {min} players, got {n}")]
    InvalidPlayerCount { n: usize, min: usize },

    #[error("round with n={n}, p={p}, q={q} never ends: {source}")]
    NonAbsorbingChain {
        n: usize,
        p: f64,
        q: f64,
        #[source]
        source: MarkovError,
    },

    #[error("position {k} is the eliminated player and has no position in the next round")]
    EliminatedHasNoPosition { k: usize },

    #[error("position {position} is outside 1..={size}")]
    InvalidPosition { position: usize, size: usize },

    #[error("closed form denominator vanishes at p={p}, q={q}")]
    DenominatorZero { p: f64, q: f64 },

    #[error("game {game} exceeded the step cap of {cap}")]
    StepCapExceeded { game: u64, cap: u64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed input: {0}")]
    Schema(String),

    #[error(transparent)]
    Markov(#[from] MarkovError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl KnockoutError {
    /// Exit status used by the command-line tool: 2 for bad input,
    /// 3 for runtime degeneracy.
    pub fn exit_code(&self) -> i32 {
        match self {
            KnockoutError::NonAbsorbingChain { .. }
            | KnockoutError::StepCapExceeded { .. }
            | KnockoutError::Markov(_)
            | KnockoutError::Io(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = KnockoutError> = std::result::Result<T, E>;
