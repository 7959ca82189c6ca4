//! Scalar abstraction shared by every numeric kernel in the crate.

use core::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar usable by the controllers, estimators and plants.
///
/// Implemented for `f32` and `f64`. The crate root exposes `f64` aliases for
/// the common types.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Every literal used by the crate is
    /// representable (possibly rounded) in any implementing type.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    /// Lossy conversion used for diagnostics and error payloads.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Mathematical sign with `sgn(0) = 0`, unlike `Float::signum`.
    #[inline]
    fn sgn(self) -> Self {
        if self > Self::zero() {
            Self::one()
        } else if self < Self::zero() {
            -Self::one()
        } else {
            Self::zero()
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub(crate) fn ensure_finite<T: Real>(what: &'static str, values: &[T]) -> Result<(), crate::MfcError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(crate::MfcError::NonFinite(what))
    }
}
