//! Scalar abstractions.
//!
//! Pointwise geometry runs on any IEEE float through [`Real`]. The closed-form
//! curvature bounds are rational functions of `(n, s, r)` and are written
//! against [`Field`], which admits both floats and exact rationals.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::Neg;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only if the target cannot hold it,
    /// which never happens for `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal fits the scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Ordered field used by the closed-form formulas.
pub trait Field: Num + Clone + PartialOrd + Neg<Output = Self> + FromPrimitive + Debug {
    #[inline]
    fn from_int(k: i64) -> Self {
        Self::from_i64(k).expect("integer fits the field")
    }
}

impl<T> Field for T where T: Num + Clone + PartialOrd + Neg<Output = T> + FromPrimitive + Debug {}

/// Lossy conversion for diagnostics and error payloads.
pub fn field_to_f64<T: Field + ToPrimitive>(x: &T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn czero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}
