//! Closed-loop estimate `F_est(t) = (1/τ)·∫ (ẏ* − α·u − kp·e) dσ` over the
//! last window.
//!
//! Under the control law of [`crate::ultralocal`] the integrand is identically
//! the estimate consumed at each past instant, so this filter returns the
//! running (trapezoid) mean of past estimates. It carries no fresh plant
//! information on its own and is kept for comparison experiments.

use crate::estimators::window::{LoopSample, SampleWindow};
use crate::scalar::Real;
use crate::{MfcError, Result};

pub fn estimate_f_closedloop<T: Real>(
    window: &SampleWindow<LoopSample<T>, T>,
    alpha: T,
    kp: T,
) -> Result<T> {
    window.require_full()?;
    let n = window.len() - 1;
    let h = window.period();
    let half = T::lit(0.5);
    let integral = window.iter().enumerate().fold(T::zero(), |acc, (i, s)| {
        let c = if i == 0 || i == n { half } else { T::one() };
        acc + c * (s.ref_rate - alpha * s.u - kp * s.e)
    }) * h;
    let f = integral / window.tau();
    if f.is_finite() {
        Ok(f)
    } else {
        Err(MfcError::NonFinite("closed-loop estimate"))
    }
}

/// Estimator state for the closed-loop formula.
///
/// Samples are pushed after the command at `t` is known, so the estimate
/// used at `t` covers the window ending one period earlier.
#[derive(Debug, Clone)]
pub struct ClosedLoopEstimator<T> {
    window: SampleWindow<LoopSample<T>, T>,
    alpha: T,
    kp: T,
}

impl<T: Real> ClosedLoopEstimator<T> {
    pub fn new(tau: T, period: T, alpha: T, kp: T) -> Result<Self> {
        Ok(Self {
            window: SampleWindow::new(tau, period)?,
            alpha,
            kp,
        })
    }

    pub fn window(&self) -> &SampleWindow<LoopSample<T>, T> {
        &self.window
    }

    pub fn push(&mut self, sample: LoopSample<T>) -> Result<()> {
        self.window.push(sample)
    }

    pub fn estimate(&self) -> Result<T> {
        estimate_f_closedloop(&self.window, self.alpha, self.kp)
    }

    pub fn estimate_or_zero(&self) -> Result<T> {
        match self.estimate() {
            Err(MfcError::NotReady { .. }) => Ok(T::zero()),
            other => other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ultralocal::{intelligent_control, Gains, UltraLocalModel};

    fn window_of(samples: impl Iterator<Item = LoopSample<f64>>, tau: f64, period: f64) -> SampleWindow<LoopSample<f64>, f64> {
        let mut w = SampleWindow::new(tau, period).unwrap();
        for s in samples {
            w.push(s).unwrap();
        }
        w
    }

    #[test]
    fn steady_tracking_returns_minus_alpha_u() {
        let w = window_of(
            (0..=10).map(|k| LoopSample { t: k as f64 * 0.01, e: 0.0, u: 0.4, ref_rate: 0.0 }),
            0.1,
            0.01,
        );
        assert!((estimate_f_closedloop(&w, 2.5, 1.0).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn unit_reference_rate() {
        let w = window_of(
            (0..=10).map(|k| LoopSample { t: k as f64 * 0.01, e: 0.0, u: 0.0, ref_rate: 1.0 }),
            0.1,
            0.01,
        );
        assert!((estimate_f_closedloop(&w, 1.0, 3.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_sawtooth_averages_to_its_midline() {
        // triangle wave between 0 and 1 with kinks on sample instants: the
        // trapezoid rule is exact, analytic mean 0.5
        let w = window_of(
            (0..=20).map(|k| {
                let v = ((k % 10) as f64 - 5.0).abs() / 5.0;
                LoopSample { t: k as f64 * 0.01, e: 0.0, u: 0.0, ref_rate: v }
            }),
            0.2,
            0.01,
        );
        let est = estimate_f_closedloop(&w, 1.0, 1.0).unwrap();
        assert!((est - 0.5).abs() < 1e-14, "{est}");
    }

    #[test]
    fn returns_mean_of_consumed_estimates() {
        let model = UltraLocalModel::new(1, 2.0).unwrap();
        let gains = Gains::ip(1.5).unwrap();
        let period = 0.01;
        let mut w = SampleWindow::new(0.1, period).unwrap();
        let mut consumed = Vec::new();
        for k in 0..=10 {
            let t = k as f64 * period;
            let (e, r, f) = ((3.0 * t).sin(), (t * 7.0).cos(), 0.3 + t * t);
            let u = intelligent_control(&model, &gains, e, 0.0, 0.0, r, f).unwrap().u;
            consumed.push(f);
            w.push(LoopSample { t, e, u, ref_rate: r }).unwrap();
        }
        let trap = (0.5 * consumed[0] + consumed[1..10].iter().sum::<f64>() + 0.5 * consumed[10]) / 10.0;
        let est = estimate_f_closedloop(&w, 2.0, 1.5).unwrap();
        assert!((est - trap).abs() < 1e-12, "{est} vs {trap}");
    }

    #[test]
    fn not_ready_before_full() {
        let mut est = ClosedLoopEstimator::new(0.1, 0.01, 1.0, 1.0).unwrap();
        est.push(LoopSample { t: 0.0, e: 0.0, u: 1.0, ref_rate: 0.0 }).unwrap();
        assert!(matches!(est.estimate(), Err(MfcError::NotReady { .. })));
        assert_eq!(est.estimate_or_zero().unwrap(), 0.0);
    }
}
