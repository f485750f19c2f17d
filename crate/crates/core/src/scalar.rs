//! Scalar abstraction for the numerical layers.
//!
//! Exact field arithmetic lives in [`crate::qfield`] and never touches
//! floating point. Everything downstream of the real embeddings (series
//! terms, quadrature, Bessel functions) is written against [`Real`], so the
//! same code runs in `f32` for quick looks and `f64` for the real work.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable by the numerical modules.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`; constants are written in `f64` once.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable")
    }

    /// Lossy conversion from an integer.
    #[inline]
    fn of_i64(x: i64) -> Self {
        Self::from_i64(x).expect("integer representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn two_pi() -> Self {
        Self::TAU()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `e^{2 pi i t}` for a real phase `t`.
#[inline]
pub fn cis_turns<T: Real>(t: T) -> Complex<T> {
    let (s, c) = (T::two_pi() * t).sin_cos();
    Complex::new(c, s)
}
