//! Productivity and decision budgets.
//!
//! Lazy exact streams can hide divergent searches (a product whose terms all
//! cancel, a boundary scan on a stream that never crosses it). Every such
//! search in the kernel is guarded by one of the budgets below and fails
//! with [`crate::Error::Diverges`] or [`crate::Error::Undecided`] instead of
//! spinning.

/// Candidate monomials a Cauchy product (or a power-series summation) may
/// examine while searching for its next emitted term.
pub const PRODUCT_FUSE: usize = 1_000_000;

/// Terms a merge may cancel in a row before giving up on finding the next
/// term of a sum.
pub const MERGE_FUSE: usize = 1_000_000;

/// Terms a boundary scan (additive decomposition, level or stratum blocks)
/// may skip before concluding the boundary is not reachable.
pub const SCAN_FUSE: usize = 100_000;

/// Depth used for monomial comparisons that recurse into lazy exponents.
pub const MONO_CMP_DEPTH: usize = 32;

/// Nesting bound for structural recursion over monomial exponents.
pub const HEIGHT_LIMIT: usize = 128;

/// Default cap on the number of distinct levels a level decomposition will
/// separate.
pub const LEVEL_CAP: usize = 16;

/// Default number of leading terms forced by user-facing commands.
pub const DEFAULT_DEPTH: usize = 8;
