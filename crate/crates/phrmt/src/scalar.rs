//! Scalar abstraction: every numerical routine in this crate is generic over
//! the real floating-point type through [`Scalar`].

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps};

/// Real floating-point scalar usable throughout the crate: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssignOps + Sum + Debug + Display + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + NumAssignOps
        + Sum
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Shorthand for the complex type over a scalar.
pub type C<T> = Complex<T>;

/// Converts an `f64` literal into the generic scalar.
///
/// Panics if the value is not representable, which cannot happen for the
/// finite constants used in this crate.
#[inline]
pub fn r<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("finite f64 constant converts to scalar")
}

/// Complex value with zero imaginary part.
#[inline]
pub fn cr<T: Scalar>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

/// Purely imaginary complex value.
#[inline]
pub fn ci<T: Scalar>(im: T) -> C<T> {
    Complex::new(T::zero(), im)
}
