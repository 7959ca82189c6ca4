//! Scalar-output ODE plants: the four nonlinear benchmark cases and a
//! harmonic oscillator used for the observer comparison.

use crate::integrate::Rk4;
use crate::plants::{check_divergence, check_inputs, Plant, INNER_STEPS};
use crate::scalar::Real;
use crate::{MfcError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OdeCase<T> {
    /// `ẏ − y = sign(u)·√|u|`, state `[y]`.
    Case1,
    /// `ÿ − 1.5ẏ − y = (u + u̇)³`, state `[y, ẏ, v]`.
    ///
    /// The held input is smoothed by `v̇ = (u − v)/smoothing`, and `v + v̇`
    /// stands in for `u + u̇`.
    Case2 { smoothing: T },
    /// `ÿ + 3ẏ + 2y = sign(u)·10^|u|`, state `[y, ẏ]`.
    Case3,
    /// `ẏ − y = (0.5ẏ + y)·u`, i.e. `ẏ = y(1 + u)/(1 − 0.5u)`, state `[y]`.
    Case4,
    /// `ÿ = −y + u + w` with a constant external disturbance `w`, state `[y, ẏ]`.
    Oscillator { disturbance: T },
}

impl<T: Real> OdeCase<T> {
    pub fn dim(&self) -> usize {
        match self {
            OdeCase::Case1 | OdeCase::Case4 => 1,
            OdeCase::Case3 | OdeCase::Oscillator { .. } => 2,
            OdeCase::Case2 { .. } => 3,
        }
    }

    /// Right-hand side for a held input `u`.
    pub fn rhs(&self, x: &[T], u: T, dx: &mut [T]) {
        match *self {
            OdeCase::Case1 => dx[0] = x[0] + u.sgn() * u.abs().sqrt(),
            OdeCase::Case2 { smoothing } => {
                let v_dot = (u - x[2]) / smoothing;
                let drive = x[2] + v_dot;
                dx[0] = x[1];
                dx[1] = T::lit(1.5) * x[1] + x[0] + drive * drive * drive;
                dx[2] = v_dot;
            }
            OdeCase::Case3 => {
                dx[0] = x[1];
                dx[1] = -T::lit(3.0) * x[1] - T::lit(2.0) * x[0] + u.sgn() * T::lit(10.0).powf(u.abs());
            }
            OdeCase::Case4 => dx[0] = x[0] * (T::one() + u) / (T::one() - T::lit(0.5) * u),
            OdeCase::Oscillator { disturbance } => {
                dx[0] = x[1];
                dx[1] = -x[0] + u + disturbance;
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct OdePlant<T> {
    case: OdeCase<T>,
    x: Vec<T>,
    t: T,
    rk: Rk4<T>,
}

impl<T: Real> OdePlant<T> {
    pub fn new(case: OdeCase<T>, x0: &[T]) -> Result<Self> {
        if x0.len() != case.dim() {
            return Err(MfcError::Config(format!(
                "{case:?} needs a state of dimension {}, got {}",
                case.dim(),
                x0.len()
            )));
        }
        if let OdeCase::Case2 { smoothing } = case {
            if !(smoothing > T::zero()) {
                return Err(MfcError::Config("input smoothing time constant must be positive".into()));
            }
        }
        Ok(Self {
            case,
            x: x0.to_vec(),
            t: T::zero(),
            rk: Rk4::new(x0.len()),
        })
    }

    pub fn case(&self) -> &OdeCase<T> {
        &self.case
    }
}

impl<T: Real> Plant<T> for OdePlant<T> {
    fn n_inputs(&self) -> usize {
        1
    }

    fn n_outputs(&self) -> usize {
        1
    }

    fn outputs(&self) -> Vec<T> {
        vec![self.x[0]]
    }

    fn state(&self) -> &[T] {
        &self.x
    }

    fn time(&self) -> T {
        self.t
    }

    fn step(&mut self, u: &[T], dt: T) -> Result<()> {
        check_inputs(u, 1, dt)?;
        let (case, u) = (self.case, u[0]);
        self.rk.integrate(&mut self.x, dt, INNER_STEPS, |x, dx| case.rhs(x, u, dx));
        self.t = self.t + dt;
        check_divergence(&self.x, self.t, "plant state")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reference integration with a much finer RK4 step.
    fn refined(case: OdeCase<f64>, x0: &[f64], u: f64, dt: f64, steps: usize) -> Vec<f64> {
        let mut x = x0.to_vec();
        Rk4::new(x.len()).integrate(&mut x, dt, steps, |x, dx| case.rhs(x, u, dx));
        x
    }

    #[test]
    fn case1_single_step_matches_refined_integration() {
        let mut p = OdePlant::new(OdeCase::Case1, &[0.0]).unwrap();
        p.step(&[1.0], 0.01).unwrap();
        let reference = refined(OdeCase::Case1, &[0.0], 1.0, 0.01, 1000);
        assert!((p.state()[0] - reference[0]).abs() < 1e-8);
        // analytic: ẏ = y + 1 ⇒ y = e^t − 1
        assert!((p.state()[0] - (0.01f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn rk4_order_on_smooth_cases() {
        // step sizes chosen so the truncation error sits well above round-off
        let cases: [(OdeCase<f64>, Vec<f64>, f64, f64); 3] = [
            (OdeCase::Case2 { smoothing: 0.02 }, vec![0.5, 0.1, -0.6], -0.7, 0.1),
            (OdeCase::Case3, vec![1.0, 0.0], 0.4, 0.1),
            (OdeCase::Case4, vec![0.2], -0.5, 2.0),
        ];
        for (case, x0, u, dt) in cases {
            let truth = refined(case, &x0, u, dt, 2000);
            let err = |steps: usize| {
                let x = refined(case, &x0, u, dt, steps);
                x.iter().zip(&truth).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            };
            let ratio = err(10) / err(20);
            assert!((ratio - 16.0).abs() < 2.5, "{case:?}: ratio {ratio}");
        }
    }

    #[test]
    fn zero_dynamics_leave_state_unchanged() {
        let mut p = OdePlant::new(OdeCase::Oscillator { disturbance: 0.0 }, &[0.0, 0.0]).unwrap();
        p.step(&[0.0], 0.1).unwrap();
        assert_eq!(p.state(), &[0.0, 0.0]);
        let mut p = OdePlant::new(OdeCase::Case4, &[0.0]).unwrap();
        p.step(&[0.7], 0.1).unwrap();
        assert_eq!(p.state(), &[0.0]);
    }

    #[test]
    fn case3_sign_is_zero_at_zero_input() {
        let mut dx = [0.0; 2];
        OdeCase::Case3.rhs(&[0.0, 0.0], 0.0, &mut dx);
        assert_eq!(dx, [0.0, 0.0]);
        OdeCase::Case3.rhs(&[0.0, 0.0], -1.0, &mut dx);
        assert_eq!(dx[1], -10.0);
    }

    #[test]
    fn case4_singular_input_diverges() {
        let mut p = OdePlant::new(OdeCase::Case4, &[1.0]).unwrap();
        assert!(matches!(p.step(&[2.0], 0.01), Err(MfcError::Divergence { .. })));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        assert!(OdePlant::new(OdeCase::Case3, &[0.0]).is_err());
        assert!(OdePlant::new(OdeCase::Case2 { smoothing: 0.0 }, &[0.0, 0.0, 0.0]).is_err());
    }
}
