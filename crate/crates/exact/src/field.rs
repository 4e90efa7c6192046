use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// An exact field. Zero tests are exact, so floating point types are
/// deliberately not instances.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    fn from_int(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }

    /// Whether the printed form starts with a minus sign that can be pulled
    /// out as a term separator.
    fn prints_negative(&self) -> bool {
        false
    }
}

/// Complex conjugation; the identity on real fields.
pub trait Conjugate {
    fn conj(&self) -> Self;
}

impl Field for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn prints_negative(&self) -> bool {
        num_traits::Signed::is_negative(self)
    }
}

impl Conjugate for BigRational {
    fn conj(&self) -> Self {
        self.clone()
    }
}
