//! Linear time-invariant plants realised from transfer functions.

use crate::integrate::Rk4;
use crate::plants::{check_divergence, check_inputs, Plant, INNER_STEPS};
use crate::scalar::Real;
use crate::{MfcError, Result};

/// `ẋ = A·x + B·u`, `y = C·x + D·u`, dense row-major matrices.
#[derive(Debug, Clone)]
pub struct StateSpacePlant<T> {
    pub a: Vec<Vec<T>>,
    pub b: Vec<Vec<T>>,
    pub c: Vec<Vec<T>>,
    pub d: Vec<Vec<T>>,
    x: Vec<T>,
    u_held: Vec<T>,
    t: T,
    rk: Rk4<T>,
}

impl<T: Real> StateSpacePlant<T> {
    pub fn new(a: Vec<Vec<T>>, b: Vec<Vec<T>>, c: Vec<Vec<T>>, d: Vec<Vec<T>>) -> Result<Self> {
        let n = a.len();
        let m = b.first().map_or(0, |r| r.len());
        let p = c.len();
        let ok = a.iter().all(|r| r.len() == n)
            && b.len() == n
            && b.iter().all(|r| r.len() == m)
            && c.iter().all(|r| r.len() == n)
            && d.len() == p
            && d.iter().all(|r| r.len() == m);
        if !ok || n == 0 || m == 0 || p == 0 {
            return Err(MfcError::Config("inconsistent state-space dimensions".into()));
        }
        Ok(Self {
            a,
            b,
            c,
            d,
            x: vec![T::zero(); n],
            u_held: vec![T::zero(); m],
            t: T::zero(),
            rk: Rk4::new(n),
        })
    }

    pub fn with_state(mut self, x0: &[T]) -> Result<Self> {
        if x0.len() != self.x.len() {
            return Err(MfcError::Config(format!(
                "initial state has {} entries, plant order is {}",
                x0.len(),
                self.x.len()
            )));
        }
        self.x.copy_from_slice(x0);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.x.len()
    }
}

impl<T: Real> Plant<T> for StateSpacePlant<T> {
    fn n_inputs(&self) -> usize {
        self.u_held.len()
    }

    fn n_outputs(&self) -> usize {
        self.c.len()
    }

    fn outputs(&self) -> Vec<T> {
        self.c
            .iter()
            .zip(&self.d)
            .map(|(crow, drow)| {
                let cx = crow.iter().zip(&self.x).fold(T::zero(), |s, (c, x)| s + *c * *x);
                drow.iter().zip(&self.u_held).fold(cx, |s, (d, u)| s + *d * *u)
            })
            .collect()
    }

    fn state(&self) -> &[T] {
        &self.x
    }

    fn time(&self) -> T {
        self.t
    }

    fn step(&mut self, u: &[T], dt: T) -> Result<()> {
        check_inputs(u, self.n_inputs(), dt)?;
        self.u_held.copy_from_slice(u);
        let (a, b) = (&self.a, &self.b);
        self.rk.integrate(&mut self.x, dt, INNER_STEPS, |x, dx| {
            for (i, d) in dx.iter_mut().enumerate() {
                let ax = a[i].iter().zip(x).fold(T::zero(), |s, (aij, xj)| s + *aij * *xj);
                *d = b[i].iter().zip(u).fold(ax, |s, (bij, uj)| s + *bij * *uj);
            }
        });
        self.t = self.t + dt;
        check_divergence(&self.x, self.t, "linear plant state")
    }
}

/// Controllable companion realisation of a strictly proper SISO transfer
/// function. Coefficients are listed from the highest power down.
pub fn realize_transfer_function<T: Real>(numerator: &[T], denominator: &[T]) -> Result<StateSpacePlant<T>> {
    let strip = |p: &[T]| -> Vec<T> { p.iter().copied().skip_while(|c| *c == T::zero()).collect() };
    let num = strip(numerator);
    let den = strip(denominator);
    if den.len() < 2 {
        return Err(MfcError::Config("denominator must have degree >= 1".into()));
    }
    if num.iter().chain(&den).any(|c| !c.is_finite()) {
        return Err(MfcError::NonFinite("transfer function coefficients"));
    }
    let n = den.len() - 1;
    let num_deg = num.len().saturating_sub(1);
    if num.len() > n {
        return Err(MfcError::Improper { num: num_deg, den: n });
    }
    let lead = den[0];
    // den = s^n + a_{n-1}s^{n-1} + … + a_0, stored ascending as a[0..n]
    let a_asc: Vec<T> = den[1..].iter().rev().map(|c| *c / lead).collect();
    let mut b_asc = vec![T::zero(); n];
    for (k, c) in num.iter().rev().enumerate() {
        b_asc[k] = *c / lead;
    }

    let mut a = vec![vec![T::zero(); n]; n];
    for (i, row) in a.iter_mut().enumerate().take(n - 1) {
        row[i + 1] = T::one();
    }
    for j in 0..n {
        a[n - 1][j] = -a_asc[j];
    }
    let mut b = vec![vec![T::zero()]; n];
    b[n - 1][0] = T::one();
    StateSpacePlant::new(a, b, vec![b_asc], vec![vec![T::zero()]])
}
