//! Scalar abstraction for the numeric core.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Lossless-enough conversion of a literal or tolerance.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `e^{iφ}`.
pub(crate) fn cis<T: Real>(phi: T) -> Complex<T> {
    Complex::new(phi.cos(), phi.sin())
}

/// `sin θ / θ` with the removable singularity at 0 filled in by its series.
pub(crate) fn sinc<T: Real>(theta: T) -> T {
    if theta.abs() < T::lit(crate::tolerances::SINC_GUARD) {
        T::one() - theta * theta / T::lit(6.0)
    } else {
        theta.sin() / theta
    }
}
