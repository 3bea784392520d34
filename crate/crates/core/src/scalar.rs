//! Floating-point abstraction shared by every module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar type the toolkit is generic over (`f32`, `f64`).
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    fn from_i64_lossy(n: i64) -> Self {
        Self::from_i64(n).expect("i64 representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum
        + Default
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// `e^{-2πiθ}` for a phase already reduced to `[0, 1)`.
pub(crate) fn unit_phase<T: Scalar>(theta: T) -> Complex<T> {
    let angle = -T::TAU() * theta;
    Complex::new(angle.cos(), angle.sin())
}

/// Fractional part in `[0, 1)`.
pub(crate) fn frac<T: Scalar>(x: T) -> T {
    let r = x - x.floor();
    if r >= T::one() {
        T::zero()
    } else {
        r
    }
}
