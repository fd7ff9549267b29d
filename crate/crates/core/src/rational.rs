//! Exact rational coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// An exact rational number in canonical reduced form.
///
/// Thin wrapper around an arbitrary-precision ratio; the denominator is kept
/// positive and fractions are always reduced. This is the coefficient field
/// of every series in the crate and also serves as the exponent domain of
/// monomials.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coeff(BigRational);

impl Coeff {
    pub fn zero() -> Self {
        Coeff(BigRational::zero())
    }

    pub fn one() -> Self {
        Coeff(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Coeff(BigRational::from_integer(BigInt::from(n)))
    }

    /// Builds `num/den`. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Coeff(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The integer value, when the denominator is one and it fits in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if !self.0.is_integer() {
            return None;
        }
        let n = self.0.to_integer();
        i64::try_from(&n).ok()
    }

    pub fn sign(&self) -> Ordering {
        self.0.cmp(&BigRational::zero())
    }

    pub fn abs(&self) -> Self {
        Coeff(self.0.abs())
    }

    /// Multiplicative inverse. Panics on zero; callers guard.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Coeff(self.0.recip())
    }

    /// `1/n!` as an exact rational.
    pub fn inv_factorial(n: u32) -> Self {
        let mut f = BigInt::one();
        for i in 2..=n {
            f *= BigInt::from(i);
        }
        Coeff(BigRational::new(BigInt::one(), f))
    }

    /// Parses a decimal literal such as `3`, `1.25` or `-0.5` exactly.
    pub fn from_decimal(s: &str) -> Option<Self> {
        let (int_part, frac_part) = match s.split_once('.') {
            Some((a, b)) => (a, b),
            None => (s, ""),
        };
        if frac_part.is_empty() {
            let n: BigInt = int_part.parse().ok()?;
            return Some(Coeff(BigRational::from_integer(n)));
        }
        let digits: String = format!("{int_part}{frac_part}");
        let n: BigInt = digits.parse().ok()?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        Some(Coeff(BigRational::new(n, den)))
    }
}

impl fmt::Display for Coeff {
    /// Renders as `p` or `p/q` with the sign on the numerator.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Coeff {
    type Err = ();

    /// Accepts `p`, `p/q` and decimal forms.
    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        if let Some((num, den)) = s.split_once('/') {
            let n: BigInt = num.trim().parse().map_err(|_| ())?;
            let d: BigInt = den.trim().parse().map_err(|_| ())?;
            if d.is_zero() {
                return Err(());
            }
            Ok(Coeff(BigRational::new(n, d)))
        } else {
            Coeff::from_decimal(s.trim()).ok_or(())
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Coeff {
            type Output = Coeff;
            fn $method(self, rhs: Coeff) -> Coeff {
                Coeff((self.0).$method(rhs.0))
            }
        }
        impl $trait for &Coeff {
            type Output = Coeff;
            fn $method(self, rhs: &Coeff) -> Coeff {
                Coeff((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for &Coeff {
    type Output = Coeff;
    fn div(self, rhs: &Coeff) -> Coeff {
        assert!(!rhs.is_zero(), "division by zero coefficient");
        Coeff(&self.0 / &rhs.0)
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff(-self.0)
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff(-&self.0)
    }
}

impl AddAssign<&Coeff> for Coeff {
    fn add_assign(&mut self, rhs: &Coeff) {
        self.0 += &rhs.0;
    }
}

impl From<i64> for Coeff {
    fn from(n: i64) -> Self {
        Coeff::from_int(n)
    }
}
