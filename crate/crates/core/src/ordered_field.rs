//! Abstract ordered-field values and the piecewise positive-cone shift.
//!
//! The map
//!
//! ```text
//!     to_positive(v) = v + 1        if v >= 0
//!                      1 / (1 - v)  if v <= 0
//! ```
//!
//! is a strictly increasing bijection from an ordered field onto its
//! positive cone, fixing nothing but mapping 0 to 1. It is defined purely
//! in terms of field operations, order and constants, so it restricts to
//! every subfield. It drives the stratum isomorphisms and the Laurent
//! positive-cone isomorphism, instantiated both by exact rationals and by
//! lazy series with a depth-bounded sign oracle.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::rational::Coeff;
use crate::transseries::TSeries;

/// Carrier of an ordered field with a (possibly semi-decidable) sign.
pub trait OrderedFieldValue: Clone + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn inverse(&self) -> Result<Self>;

    /// Sign against zero. Lazy carriers may fail with a budget error when
    /// the sign is not determined within their decision depth.
    fn sign(&self) -> Result<Ordering>;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn is_zero(&self) -> Result<bool> {
        Ok(self.sign()? == Ordering::Equal)
    }
}

/// Strictly increasing bijection onto the positive cone; `0` goes to `1`.
pub fn to_positive<K: OrderedFieldValue>(v: &K) -> Result<K> {
    match v.sign()? {
        Ordering::Greater | Ordering::Equal => Ok(v.add(&K::one())),
        Ordering::Less => K::one().sub(v).inverse(),
    }
}

/// Inverse of [`to_positive`]: `v - 1` for `v >= 1`, `1 - 1/v` for
/// `0 < v <= 1`. Fails on non-positive input.
pub fn from_positive<K: OrderedFieldValue>(v: &K) -> Result<K> {
    match v.sign()? {
        Ordering::Less | Ordering::Equal => Err(Error::NonPositive),
        Ordering::Greater => match v.sub(&K::one()).sign()? {
            Ordering::Greater | Ordering::Equal => Ok(v.sub(&K::one())),
            Ordering::Less => Ok(K::one().sub(&v.inverse()?)),
        },
    }
}

impl OrderedFieldValue for Coeff {
    fn zero() -> Self {
        Coeff::zero()
    }

    fn one() -> Self {
        Coeff::one()
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn inverse(&self) -> Result<Self> {
        if Coeff::is_zero(self) {
            return Err(Error::ZeroDivision);
        }
        Ok(self.recip())
    }

    fn sign(&self) -> Result<Ordering> {
        Ok(Coeff::sign(self))
    }
}

impl OrderedFieldValue for TSeries {
    fn zero() -> Self {
        TSeries::zero()
    }

    fn one() -> Self {
        TSeries::one()
    }

    fn add(&self, other: &Self) -> Self {
        TSeries::add(self, other)
    }

    fn neg(&self) -> Self {
        TSeries::neg(self)
    }

    fn mul(&self, other: &Self) -> Self {
        TSeries::mul(self, other)
    }

    fn inverse(&self) -> Result<Self> {
        TSeries::inverse(self)
    }

    fn sign(&self) -> Result<Ordering> {
        crate::transseries::sign(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Coeff {
        Coeff::from_int(n)
    }

    #[test]
    fn shift_on_rationals() {
        assert_eq!(to_positive(&q(0)).unwrap(), q(1));
        assert_eq!(to_positive(&q(3)).unwrap(), q(4));
        assert_eq!(to_positive(&q(-3)).unwrap(), Coeff::ratio(1, 4));
    }

    #[test]
    fn unshift_on_rationals() {
        assert_eq!(from_positive(&q(1)).unwrap(), q(0));
        assert_eq!(from_positive(&q(4)).unwrap(), q(3));
        assert_eq!(from_positive(&Coeff::ratio(1, 4)).unwrap(), q(-3));
        assert_eq!(from_positive(&q(0)).unwrap_err(), Error::NonPositive);
        assert_eq!(from_positive(&q(-2)).unwrap_err(), Error::NonPositive);
    }

    #[test]
    fn round_trip_on_a_grid() {
        for num in -8..=8 {
            for den in 1..=4 {
                let v = Coeff::ratio(num, den);
                let fwd = to_positive(&v).unwrap();
                assert_eq!(Coeff::sign(&fwd), Ordering::Greater);
                assert_eq!(from_positive(&fwd).unwrap(), v);
            }
        }
    }

    #[test]
    fn shift_is_increasing_on_series() {
        let x = TSeries::var();
        let a = to_positive(&x.neg()).unwrap();
        let b = to_positive(&x).unwrap();
        // -x < x, so the images must compare the same way.
        assert_eq!(
            crate::transseries::compare(&a, &b, 6).unwrap(),
            Ordering::Less
        );
        // to_positive(0) = 1 on series as well.
        let one = to_positive(&TSeries::zero()).unwrap();
        assert!(crate::transseries::prefix_equal(&one, &TSeries::one(), 2).unwrap());
    }
}
