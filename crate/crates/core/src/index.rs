//! Bound indices: computable names for the generated bounded subfields.
//!
//! An index `(n, k)` names the subfield of series representable with
//! exponential height at most `n` over the iterated-log base atom of depth
//! `k`. The family of these subfields exhausts the whole field, and "maps
//! bounded sets to bounded sets" becomes checkable arithmetic on indices.

use std::fmt;

/// Name of a generated bounded subfield: height `n >= -1` over the log-atom
/// of depth `k >= 0`. Ordered componentwise.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundIndex {
    /// Exponential height of the representation; `-1` names the constants.
    pub n: i64,
    /// Depth of the base atom, which is also the representation window.
    pub k: i64,
}

impl BoundIndex {
    pub fn new(n: i64, k: i64) -> Self {
        debug_assert!(n >= -1 && k >= 0, "malformed bound index ({n}, {k})");
        BoundIndex { n, k }
    }

    /// The index of real constants.
    pub fn constants() -> Self {
        BoundIndex::new(-1, 0)
    }

    /// Componentwise order (a partial order).
    pub fn le(&self, other: &BoundIndex) -> bool {
        self.n <= other.n && self.k <= other.k
    }

    /// Componentwise join.
    pub fn join(&self, other: &BoundIndex) -> BoundIndex {
        BoundIndex::new(self.n.max(other.n), self.k.max(other.k))
    }

    /// Index after re-expressing the value over the deeper window `k`.
    /// Deepening the base by one step costs one level of height, except for
    /// constants, which are representable over every window for free.
    pub fn embedded_to(&self, k: i64) -> BoundIndex {
        debug_assert!(k >= self.k);
        if self.n == -1 {
            return BoundIndex::new(-1, k);
        }
        BoundIndex::new(self.n + (k - self.k), k)
    }

    /// Upper bound for the levels of monomials representable at this index.
    pub fn level_bound(&self) -> i64 {
        self.n - self.k
    }

    /// Index bound after applying the exponential.
    pub fn exp(&self) -> BoundIndex {
        BoundIndex::new(self.n + 1, self.k)
    }

    /// Index bound after applying the logarithm. The base power turns into
    /// a deeper atom and the whole representation is re-windowed.
    pub fn log(&self) -> BoundIndex {
        BoundIndex::new(self.n + 1, self.k + 1)
    }

    /// Index bound after substituting the variable by its `j`-th
    /// exponential iterate (`j < 0` meaning logarithmic iterates).
    pub fn subst(&self, j: i64) -> BoundIndex {
        if self.n == -1 {
            return BoundIndex::new(-1, (self.k - j).max(0));
        }
        if self.k >= j {
            BoundIndex::new(self.n, self.k - j)
        } else {
            BoundIndex::new(self.n + (j - self.k), 0)
        }
    }
}

impl fmt::Display for BoundIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n, self.k)
    }
}

impl fmt::Debug for BoundIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
