//! Ultra-local model `y^(ν) = F + α·u` and the intelligent controller family
//! (iP, iPI, iPD, iPID) built on top of it.
//!
//! Sign convention: with tracking error `e = y − y*` the control law is
//!
//! ```text
//! u = ( y*^(ν) − F_est − kp·e − ki·∫e − kd·ė ) / α
//! ```
//!
//! so that the closed loop obeys `e^(ν) = −kp·e − ki·∫e − kd·ė + (F − F_est)`,
//! which is stable for positive gains.

use serde::{Deserialize, Serialize};

use crate::scalar::{ensure_finite, Real};
use crate::{MfcError, Result};

/// Derivation order of the ultra-local model. Only 1 and 2 are meaningful.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Order {
    First,
    Second,
}

impl Order {
    pub fn as_u8(self) -> u8 {
        match self {
            Order::First => 1,
            Order::Second => 2,
        }
    }
}

impl TryFrom<u8> for Order {
    type Error = MfcError;

    fn try_from(nu: u8) -> Result<Self> {
        match nu {
            1 => Ok(Order::First),
            2 => Ok(Order::Second),
            _ => Err(MfcError::Config(format!(
                "ultra-local order must be 1 or 2, got {nu}"
            ))),
        }
    }
}

impl From<Order> for u8 {
    fn from(o: Order) -> u8 {
        o.as_u8()
    }
}

/// The controller's entire knowledge of the plant: an order and an input gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UltraLocalModel<T> {
    order: Order,
    alpha: T,
}

impl<T: Real> UltraLocalModel<T> {
    pub fn new(nu: u8, alpha: T) -> Result<Self> {
        let order = Order::try_from(nu)?;
        if !alpha.is_finite() || alpha == T::zero() {
            return Err(MfcError::Config(format!(
                "alpha must be finite and non-zero, got {alpha}"
            )));
        }
        Ok(Self { order, alpha })
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn nu(&self) -> u8 {
        self.order.as_u8()
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }
}

/// Which member of the intelligent controller family a set of gains selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControllerKind {
    IP,
    IPI,
    IPD,
    IPID,
}

/// Proportional, integral and derivative gains, all non-negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gains<T> {
    pub kp: T,
    pub ki: T,
    pub kd: T,
}

impl<T: Real> Gains<T> {
    pub fn new(kp: T, ki: T, kd: T) -> Result<Self> {
        for (name, g) in [("kp", kp), ("ki", ki), ("kd", kd)] {
            if !g.is_finite() || g < T::zero() {
                return Err(MfcError::Config(format!(
                    "gain {name} must be finite and non-negative, got {g}"
                )));
            }
        }
        Ok(Self { kp, ki, kd })
    }

    pub fn ip(kp: T) -> Result<Self> {
        Self::new(kp, T::zero(), T::zero())
    }

    pub fn kind(&self) -> ControllerKind {
        match (self.ki != T::zero(), self.kd != T::zero()) {
            (false, false) => ControllerKind::IP,
            (true, false) => ControllerKind::IPI,
            (false, true) => ControllerKind::IPD,
            (true, true) => ControllerKind::IPID,
        }
    }
}

/// Output limits on `u`. Off unless configured.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Saturation<T> {
    pub min: T,
    pub max: T,
}

impl<T: Real> Saturation<T> {
    pub fn new(min: T, max: T) -> Result<Self> {
        if !(min < max) {
            return Err(MfcError::Config(format!(
                "saturation requires min < max, got [{min}, {max}]"
            )));
        }
        Ok(Self { min, max })
    }

    pub fn symmetric(limit: T) -> Result<Self> {
        Self::new(-limit, limit)
    }

    /// Returns the clipped value and whether clipping happened.
    pub fn apply(&self, u: T) -> (T, bool) {
        if u > self.max {
            (self.max, true)
        } else if u < self.min {
            (self.min, true)
        } else {
            (u, false)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlCommand<T> {
    pub u: T,
    /// The disturbance estimate the law consumed.
    pub f_used: T,
    pub saturated: bool,
}

/// Evaluates the intelligent control law.
///
/// `ref_deriv` is the ν-th derivative of the reference (ẏ* for ν = 1, ÿ* for
/// ν = 2). The integral and derivative terms only enter when their gain is
/// non-zero, so an iP evaluates the exact same floating point expression
/// whatever is passed for `e_int` and `e_dot`.
pub fn intelligent_control<T: Real>(
    model: &UltraLocalModel<T>,
    gains: &Gains<T>,
    e: T,
    e_int: T,
    e_dot: T,
    ref_deriv: T,
    f_est: T,
) -> Result<ControlCommand<T>> {
    ensure_finite("intelligent_control inputs", &[e, ref_deriv, f_est])?;
    let mut acc = ref_deriv - f_est - gains.kp * e;
    if gains.ki != T::zero() {
        ensure_finite("error integral", &[e_int])?;
        acc = acc - gains.ki * e_int;
    }
    if gains.kd != T::zero() {
        ensure_finite("error derivative", &[e_dot])?;
        acc = acc - gains.kd * e_dot;
    }
    let u = acc / model.alpha;
    ensure_finite("control output", &[u])?;
    Ok(ControlCommand {
        u,
        f_used: f_est,
        saturated: false,
    })
}

/// Highest error derivative `e^(ν)` of the closed loop under the law above.
pub fn closed_loop_error_rhs<T: Real>(
    gains: &Gains<T>,
    e: T,
    e_int: T,
    e_dot: T,
    f_mismatch: T,
) -> Result<T> {
    ensure_finite("closed_loop_error_rhs inputs", &[e, e_int, e_dot, f_mismatch])?;
    Ok(-gains.kp * e - gains.ki * e_int - gains.kd * e_dot + f_mismatch)
}

/// Running integral of the tracking error. The integral is never reset on
/// reference changes.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ControllerState<T> {
    pub e_int: T,
    pub e_prev: Option<T>,
    pub t_prev: Option<T>,
}

impl<T: Real> ControllerState<T> {
    /// Trapezoidal update of `∫e`, once per control period.
    pub fn advance(&mut self, t: T, e: T) {
        if let (Some(tp), Some(ep)) = (self.t_prev, self.e_prev) {
            self.e_int = self.e_int + (t - tp) * (e + ep) / T::lit(2.0);
        }
        self.e_prev = Some(e);
        self.t_prev = Some(t);
    }
}

/// Stateful intelligent controller: model, gains, optional saturation and the
/// error integral.
#[derive(Debug, Clone)]
pub struct IntelligentController<T> {
    pub model: UltraLocalModel<T>,
    pub gains: Gains<T>,
    pub saturation: Option<Saturation<T>>,
    state: ControllerState<T>,
}

impl<T: Real> IntelligentController<T> {
    pub fn new(model: UltraLocalModel<T>, gains: Gains<T>) -> Self {
        Self {
            model,
            gains,
            saturation: None,
            state: ControllerState::default(),
        }
    }

    pub fn with_saturation(mut self, sat: Saturation<T>) -> Self {
        self.saturation = Some(sat);
        self
    }

    pub fn state(&self) -> &ControllerState<T> {
        &self.state
    }

    /// One control period: integrates the error, evaluates the law and clips.
    pub fn update(&mut self, t: T, e: T, e_dot: T, ref_deriv: T, f_est: T) -> Result<ControlCommand<T>> {
        self.state.advance(t, e);
        let mut cmd = intelligent_control(
            &self.model,
            &self.gains,
            e,
            self.state.e_int,
            e_dot,
            ref_deriv,
            f_est,
        )?;
        if let Some(sat) = &self.saturation {
            let (u, clipped) = sat.apply(cmd.u);
            cmd.u = u;
            cmd.saturated = clipped;
        }
        Ok(cmd)
    }

    pub fn reset(&mut self) {
        self.state = ControllerState::default();
    }
}
