//! Scalar abstraction shared by every simulation module.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating point type the simulator can run on (`f32` or `f64`).
///
/// Besides the arithmetic bounds, each type carries the two numerical
/// thresholds used throughout: the amplitude pruning cut-off and the
/// tolerance for normalization and unitarity checks.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Default + Debug + Display + Send + Sync + 'static
{
    /// Amplitudes with modulus at or below this are dropped from sparse states.
    fn prune_threshold() -> Self;

    /// Tolerance for norms, probability sums and unitarity.
    fn norm_tolerance() -> Self;

    /// Identifier printed in reports.
    const NAME: &'static str;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in every Real")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn prune_threshold() -> Self {
        1e-14
    }
    fn norm_tolerance() -> Self {
        1e-12
    }
    const NAME: &'static str = "f64";
}

impl Real for f32 {
    fn prune_threshold() -> Self {
        1e-7
    }
    fn norm_tolerance() -> Self {
        1e-5
    }
    const NAME: &'static str = "f32";
}

/// Complex amplitude over a [`Real`] scalar.
pub type Amplitude<T> = Complex<T>;

pub(crate) fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

pub(crate) fn one<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

pub(crate) fn imag_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}
