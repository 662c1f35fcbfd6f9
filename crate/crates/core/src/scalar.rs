//! Scalar abstractions shared by every numerical module.
//!
//! Step-function arithmetic (cell masses, cut norms, stretching by a given
//! factor) only needs a signed field, so it is written against [`Scalar`]
//! and also runs on exact rationals. Anything that takes square roots,
//! exponentials or eigenvalues needs [`Real`].

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, Num, NumAssignOps, Signed, ToPrimitive};

/// A signed ordered field element: `f32`, `f64` or `Ratio<i64>`.
pub trait Scalar:
    Num + NumAssignOps + Signed + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Num
        + NumAssignOps
        + Signed
        + Copy
        + PartialOrd
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Send
        + Sync
        + 'static
{
}

/// Floating point scalar: `f32` or `f64`.
pub trait Real: Scalar + Float + Sum + Display {}

impl<T> Real for T where T: Scalar + Float + Sum + Display {}

/// Converts an `f64` literal into `T`.
///
/// Panics only if `T` cannot represent finite `f64` values, which none of
/// the supported scalars do.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("scalar type cannot represent f64 literal")
}

/// Converts a count into `T`.
#[inline]
pub fn count<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("scalar type cannot represent count")
}

#[inline]
pub(crate) fn max<T: PartialOrd>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

#[inline]
pub(crate) fn min<T: PartialOrd>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub(crate) fn norm2<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}
