//! One-dimensional heat equation `w_t = w_xx` on `[0, 1]`, fixed temperature
//! at `x = 0`, boundary control `w(t, 1) = u(t)`, point sensor inside.
//!
//! Method of lines: `M` interior nodes with spacing `Δx = 1/(M + 1)`,
//! central differences in space and explicit RK4 in time with an inner step
//! no larger than `0.4·Δx²`.

use crate::integrate::Rk4;
use crate::plants::{check_divergence, check_inputs, Plant};
use crate::scalar::Real;
use crate::{MfcError, Result};

/// Semi-discrete right-hand side on the interior nodes.
pub fn heat_semidiscrete_rhs<T: Real>(w: &[T], u: T, left_bc: T, dw: &mut [T]) {
    let m = w.len();
    let dx = T::one() / T::from_usize(m + 1).unwrap();
    let inv = T::one() / (dx * dx);
    let two = T::lit(2.0);
    for i in 0..m {
        let left = if i == 0 { left_bc } else { w[i - 1] };
        let right = if i + 1 == m { u } else { w[i + 1] };
        dw[i] = (left - two * w[i] + right) * inv;
    }
}

#[derive(Debug, Clone)]
pub struct HeatPlant<T> {
    w: Vec<T>,
    left_bc: T,
    u_held: T,
    sensor_x: T,
    t: T,
    rk: Rk4<T>,
}

impl<T: Real> HeatPlant<T> {
    pub const MIN_NODES: usize = 30;

    /// Starts from the affine profile `left + (u0 − left)·x`.
    pub fn new(nodes: usize, left_bc: T, u0: T, sensor_x: T) -> Result<Self> {
        if nodes < Self::MIN_NODES {
            return Err(MfcError::Config(format!(
                "heat grid needs at least {} interior nodes, got {nodes}",
                Self::MIN_NODES
            )));
        }
        if !(sensor_x > T::zero() && sensor_x < T::one()) {
            return Err(MfcError::Config(format!("sensor must lie inside (0, 1), got {sensor_x}")));
        }
        let dx = T::one() / T::from_usize(nodes + 1).unwrap();
        let w = (1..=nodes)
            .map(|i| left_bc + (u0 - left_bc) * T::from_usize(i).unwrap() * dx)
            .collect();
        Ok(Self {
            w,
            left_bc,
            u_held: u0,
            sensor_x,
            t: T::zero(),
            rk: Rk4::new(nodes),
        })
    }

    pub fn dx(&self) -> T {
        T::one() / T::from_usize(self.w.len() + 1).unwrap()
    }

    /// Temperatures on the full grid, boundaries included.
    pub fn profile(&self) -> Vec<T> {
        let mut p = Vec::with_capacity(self.w.len() + 2);
        p.push(self.left_bc);
        p.extend_from_slice(&self.w);
        p.push(self.u_held);
        p
    }

    pub fn grid(&self) -> Vec<T> {
        let dx = self.dx();
        (0..self.w.len() + 2).map(|i| T::from_usize(i).unwrap() * dx).collect()
    }

    /// Linear interpolation of the profile at `x`; exact at grid nodes.
    pub fn sample(&self, x: T) -> T {
        let p = self.profile();
        let pos = x / self.dx();
        let i = pos.floor().to_usize().unwrap_or(0).min(p.len() - 2);
        let frac = pos - T::from_usize(i).unwrap();
        if frac == T::zero() {
            p[i]
        } else {
            p[i] + frac * (p[i + 1] - p[i])
        }
    }

    pub fn inner_steps(&self, dt: T) -> usize {
        let dx = self.dx();
        let hmax = T::lit(0.4) * dx * dx;
        (dt / hmax).ceil().to_usize().unwrap_or(1).max(1)
    }
}

impl<T: Real> Plant<T> for HeatPlant<T> {
    fn n_inputs(&self) -> usize {
        1
    }

    fn n_outputs(&self) -> usize {
        1
    }

    fn outputs(&self) -> Vec<T> {
        vec![self.sample(self.sensor_x)]
    }

    fn state(&self) -> &[T] {
        &self.w
    }

    fn time(&self) -> T {
        self.t
    }

    fn step(&mut self, u: &[T], dt: T) -> Result<()> {
        check_inputs(u, 1, dt)?;
        let (u, left) = (u[0], self.left_bc);
        self.u_held = u;
        let steps = self.inner_steps(dt);
        self.rk
            .integrate(&mut self.w, dt, steps, |w, dw| heat_semidiscrete_rhs(w, u, left, dw));
        self.t = self.t + dt;
        check_divergence(&self.w, self.t, "heat profile")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_profile_is_stationary() {
        let m = 50;
        let dx = 1.0 / (m + 1) as f64;
        let w: Vec<f64> = (1..=m).map(|i| 0.2 + 1.3 * i as f64 * dx).collect();
        let mut dw = vec![1.0; m];
        heat_semidiscrete_rhs(&w, 1.5, 0.2, &mut dw);
        assert!(dw.iter().all(|d| d.abs() < 1e-9), "{dw:?}");
    }

    #[test]
    fn sine_mode_decays_at_pi_squared() {
        let m = 99;
        let dx = 1.0 / (m + 1) as f64;
        let pi = std::f64::consts::PI;
        let w: Vec<f64> = (1..=m).map(|i| (pi * i as f64 * dx).sin()).collect();
        let mut dw = vec![0.0; m];
        heat_semidiscrete_rhs(&w, 0.0, 0.0, &mut dw);
        for (d, wi) in dw.iter().zip(&w) {
            // discrete eigenvalue −(4/Δx²)·sin²(πΔx/2) differs from −π² by O(Δx²)
            assert!((d + pi * pi * wi).abs() < pi.powi(4) * dx * dx / 12.0 * 1.01 + 1e-12);
        }
    }

    #[test]
    fn initial_profile_is_already_steady() {
        let p = HeatPlant::new(98, 0.5f64, 1.0, 1.0 / 3.0).unwrap();
        let mut dw = vec![0.0; 98];
        heat_semidiscrete_rhs(p.state(), 1.0, 0.5, &mut dw);
        assert!(dw.iter().all(|d| d.abs() < 1e-9));
        assert!((p.outputs()[0] - (0.5 + 0.5 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn constant_input_converges_to_affine_steady_state() {
        let mut p = HeatPlant::new(98, 0.5f64, 0.5, 1.0 / 3.0).unwrap();
        for _ in 0..200 {
            p.step(&[1.2], 0.01).unwrap();
        }
        let expect = 0.5 + (1.2 - 0.5) / 3.0;
        assert!((p.outputs()[0] - expect).abs() < 1e-3);
        let prof = p.profile();
        assert_eq!(prof[0], 0.5);
        assert_eq!(*prof.last().unwrap(), 1.2);
    }

    #[test]
    fn rejects_coarse_grid_and_outside_sensor() {
        assert!(HeatPlant::<f64>::new(10, 0.5, 0.5, 0.3).is_err());
        assert!(HeatPlant::<f64>::new(40, 0.5, 0.5, 1.0).is_err());
    }

    #[test]
    fn inner_step_respects_stability_margin() {
        let p = HeatPlant::<f64>::new(98, 0.5, 0.5, 1.0 / 3.0).unwrap();
        let n = p.inner_steps(0.01);
        assert!(0.01 / n as f64 <= 0.4 * p.dx() * p.dx());
    }
}
