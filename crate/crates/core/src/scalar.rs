//! Floating-point scalar abstraction shared by every numeric routine.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, NumCast};

/// Real scalar the kernels and solvers are generic over (`f32` or `f64`).
pub trait Scalar:
    Float
    + FromPrimitive
    + NumCast
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        <Self as NumCast>::from(v).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(v: usize) -> Self {
        <Self as NumCast>::from(v).expect("usize representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        <f64 as NumCast>::from(self).unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Float
        + FromPrimitive
        + NumCast
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Sum
        + Debug
        + Display
        + LowerExp
        + Send
        + Sync
        + 'static
{
}

#[inline]
pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

#[inline]
pub(crate) fn norm2<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

#[inline]
pub(crate) fn norm_inf<T: Scalar>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
}

/// `x^e` for a small non-negative integer exponent.
#[inline]
pub(crate) fn powu<T: Scalar>(x: T, e: usize) -> T {
    x.powi(e as i32)
}
