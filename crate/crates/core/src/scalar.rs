//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar underlying all complex matrices.
///
/// The two associated tolerances scale the crate's numerical checks with the
/// precision of the type. For `f64` they are the fixed thresholds used
/// throughout: eigenvalues below [`Real::NOISE_FLOOR`] count as zero, and
/// state validation accepts deviations up to [`Real::VALIDATION_TOL`].
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Eigenvalue clipping threshold for `0 ln 0` and support detection.
    const NOISE_FLOOR: f64;
    /// Tolerance for Hermiticity, unit trace and positivity of states.
    const VALIDATION_TOL: f64;

    /// Converts an `f64` literal. Panics only if the value is unrepresentable.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    #[inline]
    fn noise_floor() -> Self {
        Self::lit(Self::NOISE_FLOOR)
    }

    #[inline]
    fn validation_tol() -> Self {
        Self::lit(Self::VALIDATION_TOL)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const NOISE_FLOOR: f64 = 1e-12;
    const VALIDATION_TOL: f64 = 1e-10;
}

impl Real for f32 {
    const NOISE_FLOOR: f64 = 1e-6;
    const VALIDATION_TOL: f64 = 1e-4;
}

/// `e^{i theta}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Primitive root of unity power `e^{2 pi i k / d}` with `k` reduced mod `d`.
#[inline]
pub fn root_of_unity<T: Real>(k: i64, d: usize) -> Complex<T> {
    let k = k.rem_euclid(d as i64) as usize;
    let theta = T::TAU() * T::from_count(k) / T::from_count(d);
    cis(theta)
}
