use thiserror::Error;

use crate::alphabet::Symbol;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(Symbol),

    #[error("symbol `{symbol}` has rank {rank} but is applied to {found} argument(s)")]
    ArityMismatch {
        symbol: Symbol,
        rank: usize,
        found: usize,
    },

    #[error("`{0}` is not a constant (rank 0 expected)")]
    NotConstant(Symbol),

    #[error("symbol `{symbol}` declared with conflicting ranks {first} and {second}")]
    RankConflict {
        symbol: Symbol,
        first: usize,
        second: usize,
    },

    #[error("expression is not linear: position `{0}` occurs more than once")]
    NotLinear(String),

    #[error("expression is not star-normalized")]
    NotNormalized,

    #[error("position `{0}` does not occur in the expression")]
    PositionAbsent(String),

    #[error("child index {k} out of range for `{position}` of rank {rank}")]
    ChildOutOfRange {
        position: String,
        k: usize,
        rank: usize,
    },

    #[error("invalid node id {0}")]
    InvalidNode(usize),

    #[error("unknown symbol `{0}` in tree")]
    UnknownTreeSymbol(String),

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
}
