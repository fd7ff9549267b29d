//! Exact, lazy kernel for logarithmic-exponential series.
//!
//! The crate is built in layers:
//!
//! * [`series`] — a generic engine for Hahn series over an abstract ordered
//!   monomial group: lazy strictly-decreasing term streams with memoized
//!   forcing, ring operations, dominance and additive decomposition.
//! * [`monomial`] / [`transseries`] — the log-exp instance: monomials of the
//!   shape `x_k^s * exp(g)` over iterated-log atoms, with exponential,
//!   logarithm and powers.
//! * [`levels`] / [`strata`] — the integer level grading of germs and the
//!   order isomorphisms between a stratum field and its pure-level space.
//! * [`laurent`] / [`omega`] — order isomorphisms of Laurent polynomial
//!   groups over an ordered field, and the omega map sending the additive
//!   group of series onto its own group of monomials.
//!
//! All coefficients are exact rationals; nothing in the crate rounds.

pub mod error;
pub mod index;
pub mod laurent;
pub mod levels;
pub mod limits;
pub mod monomial;
pub mod omega;
pub mod ordered_field;
pub mod rational;
pub mod series;
pub mod strata;
pub mod transseries;

pub use error::Error;
pub use index::BoundIndex;
pub use laurent::{LaurentPoly, LexPair};
pub use levels::Level;
pub use monomial::TMonomial;
pub use rational::Coeff;
pub use series::{PowerMonomial, Series, Term};
pub use transseries::TSeries;
