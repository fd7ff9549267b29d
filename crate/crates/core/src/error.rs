//! Kernel error type.
//!
//! Comparisons of lazy values are only semi-decidable and several stream
//! operations are guarded by productivity budgets, so most failures are
//! surfaced when a prefix is forced rather than when an operation is built.

use thiserror::Error;

use crate::index::BoundIndex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A leading term was requested from the zero series.
    #[error("series is zero")]
    EmptySeries,

    /// Multiplicative inverse of the zero series.
    #[error("division by zero")]
    ZeroDivision,

    /// Two streams agree on the whole inspected prefix; their comparison is
    /// not decided at this depth.
    #[error("comparison undecided at depth {depth}")]
    Undecided { depth: usize },

    /// A productivity budget was exhausted while searching for the next
    /// term. Signals input outside the grid-generable discipline.
    #[error("productivity budget of {budget} candidates exhausted")]
    Diverges { budget: usize },

    /// A forced prefix failed the strict-decrease invariant.
    #[error("monomial stream is not strictly decreasing")]
    OrderViolation,

    /// exp of a nonzero constant or log of a non-unit leading coefficient;
    /// such values are irrational and have no exact representation here.
    #[error("non-representable constant part")]
    NonRepresentableConstant,

    /// Logarithm (or positive-cone inverse) of a value that is not > 0.
    #[error("value is not strictly positive")]
    NonPositive,

    /// An embedding or stratum map was asked for an index that does not
    /// contain the value.
    #[error("target index ({} , {}) below minimal index ({} , {})",
            target.n, target.k, minimal.n, minimal.k)]
    IndexTooSmall {
        target: BoundIndex,
        minimal: BoundIndex,
    },

    /// A value fed to an inverse map lies outside the map's range.
    #[error("value outside the map's range")]
    NotInRange,

    /// A term of level above the requested stratum was encountered.
    #[error("term level exceeds the requested level {max}")]
    LevelTooHigh { max: i64 },

    /// Level decomposition found more distinct levels than the cap allows.
    #[error("more than {cap} distinct levels")]
    InfinitelyManyLevels { cap: usize },

    /// An unknown map name was passed to the bound-transport table.
    #[error("unknown map name `{0}`")]
    UnknownMap(String),

    /// The level of the zero series is undefined.
    #[error("level of zero is undefined")]
    UndefinedLevel,
}

pub type Result<T> = std::result::Result<T, Error>;
