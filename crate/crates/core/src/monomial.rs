//! Monomials of the log-exp monomial group.
//!
//! A monomial is kept in the stratified canonical shape
//!
//! ```text
//!     x_k^s * exp(g)
//! ```
//!
//! where `x_k` is the iterated-log atom of depth `k` (`x_0 = x`,
//! `x_1 = log x`, ...), `s` is a rational power and `g` is a purely infinite
//! series represented over the same atom. The logarithm of the monomial is
//! `s * x_{k+1} + g`; since a multiple of `x_{k+1}` is not representable
//! over the window `k`, the pair `(s, g)` is unique per window and the
//! monomial equals `1` exactly when `s = 0` and `g = 0`.
//!
//! Ordering is lexicographic in `(g, s)`: comparing the lazy exponents is a
//! series comparison and therefore only semi-decidable; the decision budget
//! is [`crate::limits::MONO_CMP_DEPTH`].

use std::cmp::Ordering;
use std::fmt;

use crate::error::Result;
use crate::limits::MONO_CMP_DEPTH;
use crate::rational::Coeff;
use crate::series::MonomialKey;
use crate::transseries::TSeries;

/// One log-exp monomial `x_k^s * exp(g)`.
#[derive(Clone)]
pub struct TMonomial {
    base: i64,
    power: Coeff,
    arg: TSeries,
}

impl TMonomial {
    /// General constructor. `arg` must be purely infinite and represented
    /// over the window `base`.
    pub fn new(base: i64, power: Coeff, arg: TSeries) -> Self {
        debug_assert!(base >= 0);
        debug_assert_eq!(arg.window(), base, "monomial exponent window mismatch");
        TMonomial { base, power, arg }
    }

    /// The identity monomial over the given window.
    pub fn one_at(base: i64) -> Self {
        TMonomial {
            base,
            power: Coeff::zero(),
            arg: TSeries::zero_at(base),
        }
    }

    /// The pure atom power `x_k^s`.
    pub fn atom_power(base: i64, power: Coeff) -> Self {
        TMonomial {
            base,
            power,
            arg: TSeries::zero_at(base),
        }
    }

    /// `exp(arg)` for a purely infinite exponent; a single monomial.
    pub fn exp_of(arg: TSeries) -> Self {
        TMonomial {
            base: arg.window(),
            power: Coeff::zero(),
            arg,
        }
    }

    pub fn base(&self) -> i64 {
        self.base
    }

    pub fn power(&self) -> &Coeff {
        &self.power
    }

    /// The exponent series `g`.
    pub fn arg(&self) -> &TSeries {
        &self.arg
    }

    /// Structural identity check: power zero and empty exponent.
    pub fn is_identity(&self) -> Result<bool> {
        Ok(self.power.is_zero() && self.arg.is_empty()?)
    }

    /// `self^e` for a rational exponent (the group is divisible).
    pub fn rational_pow(&self, e: &Coeff) -> Self {
        if e.is_zero() {
            return TMonomial::one_at(self.base);
        }
        TMonomial {
            base: self.base,
            power: &self.power * e,
            arg: self.arg.scale(e),
        }
    }

    /// Comparison of two monomials over the same base: lexicographic in the
    /// exponent series, then in the atom power.
    fn cmp_same_base(&self, other: &Self) -> Result<Ordering> {
        debug_assert_eq!(self.base, other.base);
        match crate::series::compare(
            self.arg.stream(),
            other.arg.stream(),
            MONO_CMP_DEPTH,
        )? {
            Ordering::Equal => Ok(self.power.cmp(&other.power)),
            ord => Ok(ord),
        }
    }
}

impl MonomialKey for TMonomial {
    fn one() -> Self {
        TMonomial::one_at(0)
    }

    fn group_mul(&self, other: &Self) -> Self {
        let base = self.base.max(other.base);
        let a = crate::transseries::embed_mono(self, base);
        let b = crate::transseries::embed_mono(other, base);
        TMonomial {
            base,
            power: &a.power + &b.power,
            arg: a.arg.add(&b.arg),
        }
    }

    fn group_inv(&self) -> Self {
        TMonomial {
            base: self.base,
            power: -&self.power,
            arg: self.arg.neg(),
        }
    }

    fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        if self.base == other.base {
            return self.cmp_same_base(other);
        }
        let base = self.base.max(other.base);
        let a = crate::transseries::embed_mono(self, base);
        let b = crate::transseries::embed_mono(other, base);
        a.cmp_same_base(&b)
    }

    fn is_one(&self) -> Result<bool> {
        self.is_identity()
    }

    fn group_pow(&self, n: i64) -> Self {
        self.rational_pow(&Coeff::from_int(n))
    }
}

impl fmt::Debug for TMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        if !self.power.is_zero() {
            write!(f, "x_{}^{}", self.base, self.power)?;
            wrote = true;
        }
        if !matches!(self.arg.stream().is_empty(), Ok(true)) {
            if wrote {
                write!(f, "*")?;
            }
            write!(f, "e^{{{:?}}}", self.arg.stream())?;
            wrote = true;
        }
        if !wrote {
            write!(f, "1")?;
        }
        Ok(())
    }
}
