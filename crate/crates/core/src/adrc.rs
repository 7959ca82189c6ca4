//! Linear active-disturbance-rejection baseline: a bandwidth-parameterised
//! extended state observer plus disturbance-cancelling state feedback.
//!
//! Plant form: `y^(n) = 𝔉 + a·u`, with `n` and `a` known. The observer
//! carries `z = (y, ẏ, …, y^(n−1), 𝔉)` and places all its poles at `−ω_o`.

use crate::integrate::Rk4;
use crate::plants::DIVERGENCE_LIMIT;
use crate::scalar::{ensure_finite, Real};
use crate::{MfcError, Result};

/// Substeps used to integrate the observer over one period.
const ESO_SUBSTEPS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdrcPlantForm<T> {
    n: usize,
    a: T,
}

impl<T: Real> AdrcPlantForm<T> {
    pub fn new(n: usize, a: T) -> Result<Self> {
        if n == 0 {
            return Err(MfcError::Config("plant order n must be >= 1".into()));
        }
        if a == T::zero() || !a.is_finite() {
            return Err(MfcError::Config(format!("input gain a must be finite and non-zero, got {a}")));
        }
        Ok(Self { n, a })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> T {
        self.a
    }
}

/// Coefficients of `(s + ω)^m` below the leading one, lowest power of `s`
/// last: entry `i` (0-based) is `C(m, i+1)·ω^{i+1}`.
pub fn binomial_gains<T: Real>(m: usize, omega: T) -> Vec<T> {
    let mut out = Vec::with_capacity(m);
    let mut coeff = T::one();
    let mut pow = T::one();
    for i in 1..=m {
        coeff = coeff * T::lit((m + 1 - i) as f64) / T::lit(i as f64);
        pow = pow * omega;
        out.push(coeff * pow);
    }
    out
}

#[derive(Debug, Clone)]
pub struct Eso<T> {
    form: AdrcPlantForm<T>,
    omega_o: T,
    gains: Vec<T>,
    z: Vec<T>,
    rk: Rk4<T>,
}

impl<T: Real> Eso<T> {
    pub fn new(form: AdrcPlantForm<T>, omega_o: T) -> Result<Self> {
        if !(omega_o > T::zero()) || !omega_o.is_finite() {
            return Err(MfcError::Config(format!("observer bandwidth must be > 0, got {omega_o}")));
        }
        let dim = form.n + 1;
        Ok(Self {
            form,
            omega_o,
            gains: binomial_gains(dim, omega_o),
            z: vec![T::zero(); dim],
            rk: Rk4::new(dim),
        })
    }

    /// Starts the output estimate at `y0` with zero higher states.
    pub fn with_output(mut self, y0: T) -> Self {
        self.z[0] = y0;
        self
    }

    pub fn form(&self) -> &AdrcPlantForm<T> {
        &self.form
    }

    pub fn omega_o(&self) -> T {
        self.omega_o
    }

    /// Observer gains `l_1 … l_{n+1}`.
    pub fn gains(&self) -> &[T] {
        &self.gains
    }

    pub fn z(&self) -> &[T] {
        &self.z
    }

    /// Current estimate of the total disturbance.
    pub fn disturbance(&self) -> T {
        self.z[self.form.n]
    }

    /// Advances the observer by `dt` with `y_meas` and `u` held.
    pub fn update(&mut self, y_meas: T, u: T, dt: T) -> Result<()> {
        eso_update(self, y_meas, u, dt)
    }
}

pub fn eso_update<T: Real>(eso: &mut Eso<T>, y_meas: T, u: T, dt: T) -> Result<()> {
    if !(dt > T::zero()) {
        return Err(MfcError::Config(format!("observer step must be > 0, got {dt}")));
    }
    ensure_finite("observer input", &[y_meas, u])?;
    let n = eso.form.n;
    let a = eso.form.a;
    let l = &eso.gains;
    let mut rk = std::mem::replace(&mut eso.rk, Rk4::new(0));
    rk.integrate(&mut eso.z, dt, ESO_SUBSTEPS, |z, dz| {
        let innov = y_meas - z[0];
        for i in 0..n {
            dz[i] = z[i + 1] + l[i] * innov;
        }
        dz[n - 1] = dz[n - 1] + a * u;
        dz[n] = l[n] * innov;
    });
    eso.rk = rk;
    if eso.z.iter().any(|v| !v.is_finite() || v.abs().as_f64() > DIVERGENCE_LIMIT) {
        return Err(MfcError::Divergence {
            what: "observer",
            t: f64::NAN,
        });
    }
    Ok(())
}

/// State-feedback gains `k_1 … k_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdrcGains<T> {
    pub k: Vec<T>,
}

impl<T: Real> AdrcGains<T> {
    /// Places the closed-loop tracking poles at `−ω_c`: `k_i` is the
    /// coefficient of `s^{i−1}` in `(s + ω_c)^n`.
    pub fn from_bandwidth(n: usize, omega_c: T) -> Result<Self> {
        if n == 0 || !(omega_c > T::zero()) {
            return Err(MfcError::Config(format!(
                "need n >= 1 and omega_c > 0, got n={n}, omega_c={omega_c}"
            )));
        }
        let mut k = binomial_gains(n, omega_c);
        k.reverse();
        Ok(Self { k })
    }
}

/// `u = (y*^(n) − z_{n+1} − Σ k_i·(z_i − y*^{(i−1)})) / a`.
///
/// `reference` holds `y*, ẏ*, …, y*^(n)`.
pub fn adrc_control<T: Real>(z: &[T], reference: &[T], gains: &AdrcGains<T>, form: &AdrcPlantForm<T>) -> Result<T> {
    let n = form.n;
    if z.len() != n + 1 || reference.len() != n + 1 || gains.k.len() != n {
        return Err(MfcError::Config(format!(
            "adrc dimensions: z={}, reference={}, gains={}, n={n}",
            z.len(),
            reference.len(),
            gains.k.len()
        )));
    }
    let mut v = reference[n] - z[n];
    for i in 0..n {
        v = v - gains.k[i] * (z[i] - reference[i]);
    }
    Ok(v / form.a)
}

/// Observer plus feedback, with a warm-up during which `u = 0`.
#[derive(Debug, Clone)]
pub struct AdrcController<T> {
    pub eso: Eso<T>,
    pub gains: AdrcGains<T>,
    warmup: usize,
    ticks: usize,
}

impl<T: Real> AdrcController<T> {
    pub fn new(eso: Eso<T>, gains: AdrcGains<T>, warmup: usize) -> Result<Self> {
        if gains.k.len() != eso.form.n {
            return Err(MfcError::Config("feedback gain count must equal n".into()));
        }
        Ok(Self {
            eso,
            gains,
            warmup,
            ticks: 0,
        })
    }

    pub fn control(&self, reference: &[T]) -> Result<T> {
        if self.ticks < self.warmup {
            return Ok(T::zero());
        }
        adrc_control(&self.eso.z, reference, &self.gains, &self.eso.form)
    }

    /// Feeds the observer the measurement and the input held for the next `dt`.
    pub fn observe(&mut self, y_meas: T, u: T, dt: T) -> Result<()> {
        self.ticks += 1;
        self.eso.update(y_meas, u, dt)
    }
}
