//! Ground-truth plants, integrated under zero-order-hold inputs.

pub mod heat;
pub mod linear;
pub mod nonlinear;
pub mod three_tank;

pub use heat::{heat_semidiscrete_rhs, HeatPlant};
pub use linear::{realize_transfer_function, StateSpacePlant};
pub use nonlinear::{OdeCase, OdePlant};
pub use three_tank::{three_tank_rhs, ThreeTankParams, ThreeTankPlant};

use crate::scalar::Real;
use crate::{MfcError, Result};

/// Inner RK4 steps per control period for the ODE plants.
pub const INNER_STEPS: usize = 10;

/// States beyond this magnitude count as divergence.
pub const DIVERGENCE_LIMIT: f64 = 1e9;

/// A simulated plant driven by a held input vector.
pub trait Plant<T: Real> {
    fn n_inputs(&self) -> usize;

    fn n_outputs(&self) -> usize;

    /// Noise-free outputs at the current time.
    fn outputs(&self) -> Vec<T>;

    fn state(&self) -> &[T];

    fn time(&self) -> T;

    /// Holds `u` for `dt` and integrates.
    fn step(&mut self, u: &[T], dt: T) -> Result<()>;
}

pub(crate) fn check_inputs<T: Real>(u: &[T], expected: usize, dt: T) -> Result<()> {
    if u.len() != expected {
        return Err(MfcError::Config(format!(
            "plant expects {expected} inputs, got {}",
            u.len()
        )));
    }
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(MfcError::Config(format!("step needs dt > 0, got {dt}")));
    }
    if u.iter().any(|v| !v.is_finite()) {
        return Err(MfcError::NonFinite("plant input"));
    }
    Ok(())
}

pub(crate) fn check_divergence<T: Real>(x: &[T], t: T, what: &'static str) -> Result<()> {
    let limit = T::lit(DIVERGENCE_LIMIT);
    if x.iter().all(|v| v.is_finite() && v.abs() <= limit) {
        Ok(())
    } else {
        Err(MfcError::Divergence { what, t: t.as_f64() })
    }
}

/// Any of the built-in plants, so scenarios can own (and clone) one.
#[derive(Debug, Clone)]
pub enum AnyPlant<T> {
    Linear(StateSpacePlant<T>),
    Ode(OdePlant<T>),
    ThreeTank(ThreeTankPlant<T>),
    Heat(HeatPlant<T>),
}

macro_rules! dispatch {
    ($self:ident, $p:ident => $e:expr) => {
        match $self {
            AnyPlant::Linear($p) => $e,
            AnyPlant::Ode($p) => $e,
            AnyPlant::ThreeTank($p) => $e,
            AnyPlant::Heat($p) => $e,
        }
    };
}

impl<T: Real> Plant<T> for AnyPlant<T> {
    fn n_inputs(&self) -> usize {
        dispatch!(self, p => p.n_inputs())
    }

    fn n_outputs(&self) -> usize {
        dispatch!(self, p => p.n_outputs())
    }

    fn outputs(&self) -> Vec<T> {
        dispatch!(self, p => p.outputs())
    }

    fn state(&self) -> &[T] {
        dispatch!(self, p => p.state())
    }

    fn time(&self) -> T {
        dispatch!(self, p => p.time())
    }

    fn step(&mut self, u: &[T], dt: T) -> Result<()> {
        dispatch!(self, p => p.step(u, dt))
    }
}

impl<T: Real> AnyPlant<T> {
    /// Full spatial profile, for distributed plants.
    pub fn field(&self) -> Option<Vec<T>> {
        match self {
            AnyPlant::Heat(h) => Some(h.profile()),
            _ => None,
        }
    }

    /// Node abscissae matching [`AnyPlant::field`].
    pub fn field_grid(&self) -> Option<Vec<T>> {
        match self {
            AnyPlant::Heat(h) => Some(h.grid()),
            _ => None,
        }
    }
}
