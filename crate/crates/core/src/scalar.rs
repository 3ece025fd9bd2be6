//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use nalgebra::RealField;
use num_complex::Complex;

/// Real floating-point scalar: `f32` or `f64`.
///
/// Everything transcendental goes through `nalgebra::RealField` so that the
/// same code drives the block eigensolvers and the closed-form formulas.
pub trait Real:
    RealField + Copy + Debug + Display + LowerExp + Send + Sync + 'static
{
    fn lit(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn of_usize(n: usize) -> Self {
        Self::lit(n as f64)
    }
    fn of_i64(n: i64) -> Self {
        Self::lit(n as f64)
    }
}

impl Real for f32 {
    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    #[inline]
    fn lit(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
}

pub type Cplx<T> = Complex<T>;

#[inline]
pub(crate) fn czero<T: Real>() -> Cplx<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cre<T: Real>(x: T) -> Cplx<T> {
    Complex::new(x, T::zero())
}

/// `exp(i·phase)`
#[inline]
pub(crate) fn cis<T: Real>(phase: T) -> Cplx<T> {
    Complex::new(phase.cos(), phase.sin())
}

#[inline]
pub(crate) fn norm_sqr<T: Real>(z: Cplx<T>) -> T {
    z.re * z.re + z.im * z.im
}
