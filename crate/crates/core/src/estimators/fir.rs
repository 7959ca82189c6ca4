//! Algebraic estimation of the total disturbance `F` as a pair of FIR filters.
//!
//! For the first-order model `ẏ = Φ + α·u` on a window of length `τ`, with
//! window-local time `σ ∈ [0, τ]` (σ = 0 at the oldest sample),
//!
//! ```text
//! Φ = −(6/τ³) ∫₀^τ [ (τ − 2σ)·y(σ) + α·σ(τ − σ)·u(σ) ] dσ
//! ```
//!
//! and for the second-order model `ÿ = Φ + α·u`,
//!
//! ```text
//! Φ = (60/τ⁵) ∫₀^τ [ (τ² − 6τσ + 6σ²)·y(σ) − (α/2)·σ²(τ − σ)²·u(σ) ] dσ
//! ```
//!
//! Both kernels annihilate the unknown initial conditions. After sampling, the
//! output integral becomes a dot product with `w_y`. The input is piecewise
//! constant (zero-order hold), so its kernel is integrated exactly over each
//! hold interval and stored in `w_u`.
//!
//! First-order output weights use the trapezoid rule (end taps at half
//! weight), whose error for a ramp output is `2·Te²·Δy/τ³` where `Δy` is the
//! output change across the window. The trapezoid rule does not sum the
//! second-order kernel to zero, so second-order output weights integrate the
//! kernel exactly against the piecewise-linear interpolant of the samples.

use crate::estimators::window::{IoSample, SampleWindow};
use crate::scalar::Real;
use crate::ultralocal::Order;
use crate::{MfcError, Result};

/// Precomputed taps, oldest sample first.
///
/// `F_est = Σ w_y[i]·y[i] − α·Σ w_u[i]·u[i]`, where `u[i]` is the input held
/// over the interval ending at sample `i` (so `w_u[0] = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct FirWeights<T> {
    pub order: Order,
    pub tau: T,
    pub period: T,
    pub alpha: T,
    pub w_y: Vec<T>,
    pub w_u: Vec<T>,
}

/// First-order weights; `tau` is rounded to a whole number of periods.
pub fn build_fir_weights<T: Real>(tau: T, period: T, alpha: T) -> Result<FirWeights<T>> {
    FirWeights::new(Order::First, tau, period, alpha)
}

impl<T: Real> FirWeights<T> {
    pub fn new(order: Order, tau: T, period: T, alpha: T) -> Result<Self> {
        if !(period > T::zero()) || !period.is_finite() || !tau.is_finite() {
            return Err(MfcError::Config(format!(
                "weights need a finite positive period, got tau={tau}, period={period}"
            )));
        }
        if tau < T::lit(2.0) * period {
            return Err(MfcError::WindowTooShort {
                tau: tau.as_f64(),
                period: period.as_f64(),
            });
        }
        if !alpha.is_finite() || alpha == T::zero() {
            return Err(MfcError::Config(format!("alpha must be non-zero, got {alpha}")));
        }
        let n = (tau / period).round().to_usize().unwrap_or(2).max(2);
        let h = period;
        let tau = T::from_usize(n).unwrap() * h;
        let sigma = |i: usize| T::from_usize(i).unwrap() * h;
        let half = T::lit(0.5);

        let (w_y, w_u) = match order {
            Order::First => {
                let scale = T::lit(6.0) / (tau * tau * tau);
                let w_y = (0..=n)
                    .map(|i| {
                        let c = if i == 0 || i == n { half } else { T::one() };
                        -scale * c * h * (tau - T::lit(2.0) * sigma(i))
                    })
                    .collect();
                // ∫ σ(τ − σ) dσ = τσ²/2 − σ³/3
                let prim = |s: T| tau * s * s * half - s * s * s / T::lit(3.0);
                let w_u = zoh_weights(n, |i| prim(sigma(i)), scale);
                (w_y, w_u)
            }
            Order::Second => {
                let tau5 = tau.powi(5);
                let kernel = |s: T| tau * tau - T::lit(6.0) * tau * s + T::lit(6.0) * s * s;
                let scale_y = T::lit(60.0) / tau5;
                let mut w_y = vec![T::zero(); n + 1];
                for j in 0..n {
                    // Simpson is exact for the cubic kernel·hat products.
                    let (a, b) = (sigma(j), sigma(j + 1));
                    let m = (a + b) * half;
                    let simpson = |g: &dyn Fn(T) -> T| h / T::lit(6.0) * (g(a) + T::lit(4.0) * g(m) + g(b));
                    w_y[j] = w_y[j] + simpson(&|s| kernel(s) * (b - s) / h);
                    w_y[j + 1] = w_y[j + 1] + simpson(&|s| kernel(s) * (s - a) / h);
                }
                for w in &mut w_y {
                    *w = *w * scale_y;
                }
                // ∫ σ²(τ − σ)² dσ = τ²σ³/3 − τσ⁴/2 + σ⁵/5
                let prim = |s: T| {
                    tau * tau * s.powi(3) / T::lit(3.0) - tau * s.powi(4) * half + s.powi(5) / T::lit(5.0)
                };
                let w_u = zoh_weights(n, |i| prim(sigma(i)), T::lit(30.0) / tau5);
                (w_y, w_u)
            }
        };
        Ok(Self {
            order,
            tau,
            period,
            alpha,
            w_y,
            w_u,
        })
    }

    pub fn taps(&self) -> usize {
        self.w_y.len()
    }

    /// Applies the filter to equally long output and input sequences.
    pub fn apply(&self, y: impl IntoIterator<Item = T>, u: impl IntoIterator<Item = T>) -> T {
        let sy = self.w_y.iter().zip(y).fold(T::zero(), |acc, (w, v)| acc + *w * v);
        let su = self.w_u.iter().zip(u).fold(T::zero(), |acc, (w, v)| acc + *w * v);
        sy - self.alpha * su
    }

    /// Euclidean norm of the output taps: the gain from white output noise
    /// to the estimate's standard deviation.
    pub fn noise_gain(&self) -> T {
        self.w_y.iter().fold(T::zero(), |acc, w| acc + *w * *w).sqrt()
    }
}

fn zoh_weights<T: Real>(n: usize, prim_at: impl Fn(usize) -> T, scale: T) -> Vec<T> {
    let mut w = vec![T::zero(); n + 1];
    for i in 1..=n {
        w[i] = scale * (prim_at(i) - prim_at(i - 1));
    }
    w
}

/// Evaluates the algebraic estimate on a full window.
pub fn estimate_f_algebraic<T: Real>(
    window: &SampleWindow<IoSample<T>, T>,
    weights: &FirWeights<T>,
) -> Result<T> {
    window.require_full()?;
    if window.capacity() != weights.taps() {
        return Err(MfcError::Config(format!(
            "window holds {} samples but the filter has {} taps",
            window.capacity(),
            weights.taps()
        )));
    }
    let f = weights.apply(window.iter().map(|s| s.y), window.iter().map(|s| s.u));
    if f.is_finite() {
        Ok(f)
    } else {
        Err(MfcError::NonFinite("algebraic estimate"))
    }
}

/// Sliding-window algebraic estimator with the zero warm-up policy.
#[derive(Debug, Clone)]
pub struct AlgebraicEstimator<T> {
    window: SampleWindow<IoSample<T>, T>,
    weights: FirWeights<T>,
}

impl<T: Real> AlgebraicEstimator<T> {
    pub fn new(order: Order, tau: T, period: T, alpha: T) -> Result<Self> {
        let weights = FirWeights::new(order, tau, period, alpha)?;
        let window = SampleWindow::new(tau, period)?;
        Ok(Self { window, weights })
    }

    pub fn weights(&self) -> &FirWeights<T> {
        &self.weights
    }

    pub fn window(&self) -> &SampleWindow<IoSample<T>, T> {
        &self.window
    }

    /// Records `y(t)` and the input held over the period ending at `t`.
    pub fn push(&mut self, t: T, y: T, u_held: T) -> Result<()> {
        self.window.push(IoSample { t, y, u: u_held })
    }

    pub fn estimate(&self) -> Result<T> {
        estimate_f_algebraic(&self.window, &self.weights)
    }

    /// `0` until the window first fills.
    pub fn estimate_or_zero(&self) -> Result<T> {
        match self.estimate() {
            Err(MfcError::NotReady { .. }) => Ok(T::zero()),
            other => other,
        }
    }
}
