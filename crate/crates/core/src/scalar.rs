//! The numeric value type carried by cost functions and cost shares.
//!
//! Everything in the crate is generic over [`Scalar`]. The default instantiation
//! is the exact [`Rational`](crate::Rational); floating point works for display
//! and quick experiments but budget balance and fairness are only exact
//! identities over rationals.

use std::fmt;

use num_traits::{FromPrimitive, Num};

/// Numeric type usable as a cost value.
pub trait Scalar:
    Num + Clone + PartialOrd + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn from_count(count: u64) -> Self {
        Self::from_u64(count).expect("count representable in scalar type")
    }
}

impl<T> Scalar for T where
    T: Num + Clone + PartialOrd + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

/// `max` for partially ordered values; incomparable pairs keep `a`.
pub(crate) fn max_of<T: Scalar>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}
