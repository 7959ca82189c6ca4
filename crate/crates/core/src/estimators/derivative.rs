//! Backward-difference error derivative with an optional first-order
//! low-pass, used by the iPD and iPID laws.

use crate::scalar::Real;
use crate::{MfcError, Result};

/// Two-point backward difference over the last two entries of `history`.
pub fn estimate_error_derivative<T: Real>(history: &[T], period: T) -> Result<T> {
    if history.len() < 2 {
        return Err(MfcError::NotReady {
            have: history.len(),
            need: 2,
        });
    }
    if !(period > T::zero()) {
        return Err(MfcError::Config(format!("period must be positive, got {period}")));
    }
    let n = history.len();
    Ok((history[n - 1] - history[n - 2]) / period)
}

/// Streaming version with an optional smoothing time constant.
///
/// The filter is the discrete first-order lag
/// `d ← d + Te/(T_f + Te)·(raw − d)`, seeded with the first raw difference.
#[derive(Debug, Clone)]
pub struct DerivativeEstimator<T> {
    period: T,
    gain: T,
    prev: Option<T>,
    value: Option<T>,
}

impl<T: Real> DerivativeEstimator<T> {
    pub fn new(period: T, smoothing: Option<T>) -> Result<Self> {
        if !(period > T::zero()) {
            return Err(MfcError::Config(format!("period must be positive, got {period}")));
        }
        let gain = match smoothing {
            Some(tf) if tf < T::zero() || !tf.is_finite() => {
                return Err(MfcError::Config(format!("smoothing time constant must be >= 0, got {tf}")))
            }
            Some(tf) => period / (tf + period),
            None => T::one(),
        };
        Ok(Self {
            period,
            gain,
            prev: None,
            value: None,
        })
    }

    /// Feeds one error sample; `None` until two samples have been seen.
    pub fn update(&mut self, e: T) -> Option<T> {
        if let Some(p) = self.prev {
            let raw = (e - p) / self.period;
            self.value = Some(match self.value {
                Some(d) => d + self.gain * (raw - d),
                None => raw,
            });
        }
        self.prev = Some(e);
        self.value
    }

    pub fn value(&self) -> Option<T> {
        self.value
    }
}
