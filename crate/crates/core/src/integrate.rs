//! Classical fixed-step fourth-order Runge–Kutta.

use crate::scalar::Real;

/// RK4 stepper with reusable stage buffers.
#[derive(Debug, Clone, Default)]
pub struct Rk4<T> {
    k1: Vec<T>,
    k2: Vec<T>,
    k3: Vec<T>,
    k4: Vec<T>,
    tmp: Vec<T>,
}

impl<T: Real> Rk4<T> {
    pub fn new(dim: usize) -> Self {
        let z = vec![T::zero(); dim];
        Self {
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            tmp: z,
        }
    }

    fn resize(&mut self, dim: usize) {
        if self.k1.len() != dim {
            *self = Self::new(dim);
        }
    }

    /// Advances the autonomous system `ẋ = f(x)` by one step `h`.
    pub fn step<F>(&mut self, x: &mut [T], h: T, mut rhs: F)
    where
        F: FnMut(&[T], &mut [T]),
    {
        let n = x.len();
        self.resize(n);
        let half = h * T::lit(0.5);

        rhs(x, &mut self.k1);
        for i in 0..n {
            self.tmp[i] = x[i] + half * self.k1[i];
        }
        rhs(&self.tmp, &mut self.k2);
        for i in 0..n {
            self.tmp[i] = x[i] + half * self.k2[i];
        }
        rhs(&self.tmp, &mut self.k3);
        for i in 0..n {
            self.tmp[i] = x[i] + h * self.k3[i];
        }
        rhs(&self.tmp, &mut self.k4);
        let sixth = h / T::lit(6.0);
        let two = T::lit(2.0);
        for i in 0..n {
            x[i] = x[i] + sixth * (self.k1[i] + two * (self.k2[i] + self.k3[i]) + self.k4[i]);
        }
    }

    /// `steps` equal steps covering `dt`.
    pub fn integrate<F>(&mut self, x: &mut [T], dt: T, steps: usize, mut rhs: F)
    where
        F: FnMut(&[T], &mut [T]),
    {
        let h = dt / T::from_usize(steps.max(1)).unwrap();
        for _ in 0..steps.max(1) {
            self.step(x, h, &mut rhs);
        }
    }
}
