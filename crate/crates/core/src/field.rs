//! Coefficient fields.
//!
//! Every computation in this crate is exact. The engine is generic over any
//! field of fractions `Ratio<T>` of a signed integer type; [`crate::Scalar`]
//! (arbitrary-precision rationals) is the default used everywhere user-facing.
//! Floating-point types are deliberately not fields here: row reduction needs
//! exact zero tests.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, Signed};

/// An exact field of characteristic zero.
pub trait Field:
    Clone + PartialEq + Eq + Debug + Display + Num + Neg<Output = Self> + Send + Sync + 'static
{
    fn from_i64(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// `Some(n)` when the value is an integer that fits in an `i64`.
    fn as_small_integer(&self) -> Option<i64>;

    fn is_negative(&self) -> bool;
}

impl<T> Field for Ratio<T>
where
    T: Clone
        + Integer
        + Signed
        + From<i64>
        + Debug
        + Display
        + Send
        + Sync
        + 'static
        + TryInto<i64>,
{
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(T::from(n))
    }

    fn as_small_integer(&self) -> Option<i64> {
        if self.is_integer() {
            self.to_integer().try_into().ok()
        } else {
            None
        }
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

/// `(-1)^n` as a field element.
pub(crate) fn sign<F: Field>(odd: bool) -> F {
    if odd {
        -F::one()
    } else {
        F::one()
    }
}
