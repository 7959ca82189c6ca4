use std::collections::VecDeque;

use crate::scalar::Real;
use crate::{MfcError, Result};

/// A timestamped sample.
pub trait Timed<T> {
    fn time(&self) -> T;
}

/// Output/input pair for the algebraic estimator.
///
/// `u` is the input that was held during the sampling period ending at `t`,
/// i.e. the command computed one period earlier. With that convention the
/// newest sample never depends on the command about to be computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IoSample<T> {
    pub t: T,
    pub y: T,
    pub u: T,
}

/// Tuple consumed by the closed-loop estimator: tracking error, the command
/// computed at `t`, and the reference rate at `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopSample<T> {
    pub t: T,
    pub e: T,
    pub u: T,
    pub ref_rate: T,
}

impl<T: Copy> Timed<T> for IoSample<T> {
    fn time(&self) -> T {
        self.t
    }
}

impl<T: Copy> Timed<T> for LoopSample<T> {
    fn time(&self) -> T {
        self.t
    }
}

/// Sliding window of `N + 1` equally spaced samples spanning `τ = N·Te`.
#[derive(Debug, Clone)]
pub struct SampleWindow<S, T> {
    period: T,
    intervals: usize,
    buf: VecDeque<S>,
}

impl<S: Timed<T> + Copy, T: Real> SampleWindow<S, T> {
    /// `N = round(tau / period)`; the effective window length is `N·period`.
    pub fn new(tau: T, period: T) -> Result<Self> {
        if !(period > T::zero()) || !period.is_finite() || !tau.is_finite() {
            return Err(MfcError::Config(format!(
                "window needs a finite positive period, got tau={tau}, period={period}"
            )));
        }
        if tau < T::lit(2.0) * period {
            return Err(MfcError::WindowTooShort {
                tau: tau.as_f64(),
                period: period.as_f64(),
            });
        }
        let intervals = (tau / period).round().to_usize().unwrap_or(2).max(2);
        Ok(Self {
            period,
            intervals,
            buf: VecDeque::with_capacity(intervals + 1),
        })
    }

    pub fn period(&self) -> T {
        self.period
    }

    /// Number of sampling intervals `N` covered by a full window.
    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn capacity(&self) -> usize {
        self.intervals + 1
    }

    pub fn tau(&self) -> T {
        T::from_usize(self.intervals).unwrap() * self.period
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.buf.len() == self.capacity()
    }

    /// Appends a sample, evicting the oldest one once full.
    pub fn push(&mut self, sample: S) -> Result<()> {
        let t = sample.time();
        if !t.is_finite() {
            return Err(MfcError::NonFinite("sample time"));
        }
        if let Some(last) = self.buf.back().map(|s| s.time()) {
            if !(t > last) {
                return Err(MfcError::Ordering {
                    t: t.as_f64(),
                    last: last.as_f64(),
                });
            }
            let tol = (T::lit(1e-9) * self.period).max(T::lit(8.0) * T::epsilon() * t.abs());
            if ((t - last) - self.period).abs() > tol {
                return Err(MfcError::Spacing {
                    t: t.as_f64(),
                    last: last.as_f64(),
                    period: self.period.as_f64(),
                });
            }
        }
        if self.is_full() {
            self.buf.pop_front();
        }
        self.buf.push_back(sample);
        Ok(())
    }

    /// Oldest first.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = &S> + '_ {
        self.buf.iter()
    }

    pub fn clear(&mut self) {
        self.buf.clear();
    }

    pub(crate) fn require_full(&self) -> Result<()> {
        if self.is_full() {
            Ok(())
        } else {
            Err(MfcError::NotReady {
                have: self.buf.len(),
                need: self.capacity(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: f64) -> IoSample<f64> {
        IoSample { t, y: 1.0, u: 0.0 }
    }

    #[test]
    fn push_into_empty_window() {
        let mut w = SampleWindow::new(1.0, 0.5).unwrap();
        w.push(s(0.0)).unwrap();
        assert_eq!(w.len(), 1);
        assert!(!w.is_full());
    }

    #[test]
    fn full_window_evicts_oldest() {
        let mut w = SampleWindow::new(1.0, 0.5).unwrap();
        for k in 0..3 {
            w.push(s(k as f64 * 0.5)).unwrap();
        }
        assert!(w.is_full());
        w.push(s(1.5)).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.iter().next().unwrap().t, 0.5);
        let times: Vec<f64> = w.iter().map(|x| x.t).collect();
        assert!(times.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn decreasing_time_is_an_ordering_error() {
        let mut w = SampleWindow::new(1.0, 0.5).unwrap();
        w.push(s(1.0)).unwrap();
        assert!(matches!(w.push(s(0.5)), Err(MfcError::Ordering { .. })));
        assert!(matches!(w.push(s(1.0)), Err(MfcError::Ordering { .. })));
    }

    #[test]
    fn irregular_spacing_is_rejected() {
        let mut w = SampleWindow::new(1.0, 0.5).unwrap();
        w.push(s(0.0)).unwrap();
        assert!(matches!(w.push(s(0.7)), Err(MfcError::Spacing { .. })));
    }

    #[test]
    fn window_shorter_than_two_periods_is_rejected() {
        assert!(matches!(
            SampleWindow::<IoSample<f64>, f64>::new(0.15, 0.1),
            Err(MfcError::WindowTooShort { .. })
        ));
        let w = SampleWindow::<IoSample<f64>, f64>::new(0.2, 0.01).unwrap();
        assert_eq!(w.intervals(), 20);
        assert_eq!(w.capacity(), 21);
    }

    #[test]
    fn not_ready_until_full() {
        let mut w = SampleWindow::new(1.0, 0.5).unwrap();
        w.push(s(0.0)).unwrap();
        assert_eq!(w.require_full(), Err(MfcError::NotReady { have: 1, need: 3 }));
    }
}
