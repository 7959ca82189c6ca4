//! The sampled control loop.
//!
//! Each period: read the plant outputs and add noise, update the estimator,
//! compute the command, log the row, then hold the command while the plant
//! integrates to the next sample.

use crate::adrc::AdrcController;
use crate::estimators::{AlgebraicEstimator, ClosedLoopEstimator, DerivativeEstimator, LoopSample};
use crate::noise::NoiseStream;
use crate::plants::{AnyPlant, Plant};
use crate::sim::config::{build_adrc, ControllerConfig, EstimatorConfig, PlantConfig, Scenario};
use crate::sim::series::{LoopTrace, TimeSeries};
use crate::trajectory::{RefPoint, ReferenceProfile};
use crate::ultralocal::{Gains, IntelligentController, Order, Saturation, UltraLocalModel};
use crate::{MfcError, Result};

enum Estimator {
    Algebraic(AlgebraicEstimator<f64>),
    ClosedLoop(ClosedLoopEstimator<f64>),
    Oracle,
}

enum Controller {
    Intelligent {
        ctl: IntelligentController<f64>,
        est: Estimator,
        deriv: Option<DerivativeEstimator<f64>>,
    },
    Adrc {
        ctl: AdrcController<f64>,
        saturation: Option<Saturation<f64>>,
    },
}

struct Loop {
    ctl: Controller,
    reference: ReferenceProfile<f64>,
    noise: NoiseStream,
    u_prev: f64,
    trace: LoopTrace,
}

/// What went wrong inside a period: either the run diverged (stop and keep
/// the log) or the configuration is unusable.
enum StepFault {
    Diverged,
    Fatal(MfcError),
}

impl From<MfcError> for StepFault {
    fn from(e: MfcError) -> Self {
        match e {
            MfcError::Divergence { .. } | MfcError::NonFinite(_) => StepFault::Diverged,
            other => StepFault::Fatal(other),
        }
    }
}

fn build_loops(s: &Scenario) -> Result<Vec<Loop>> {
    let u_initial = match s.plant {
        PlantConfig::Heat { u0, .. } => u0,
        _ => 0.0,
    };
    s.loops
        .iter()
        .enumerate()
        .map(|(i, cfg)| {
            let ctl = match &cfg.controller {
                ControllerConfig::Intelligent {
                    nu,
                    alpha,
                    kp,
                    ki,
                    kd,
                    estimator,
                    derivative_filter,
                } => {
                    let model = UltraLocalModel::new(*nu, *alpha)?;
                    let mut ctl = IntelligentController::new(model, Gains::new(*kp, *ki, *kd)?);
                    if let Some(sat) = cfg.saturation {
                        ctl = ctl.with_saturation(Saturation::new(sat.min, sat.max)?);
                    }
                    let est = match estimator {
                        EstimatorConfig::Algebraic { .. } => Estimator::Algebraic(AlgebraicEstimator::new(
                            model.order(),
                            estimator.tau(s.period).unwrap(),
                            s.period,
                            *alpha,
                        )?),
                        EstimatorConfig::ClosedLoop { .. } => {
                            if model.order() != Order::First {
                                return Err(MfcError::Config(
                                    "the closed-loop estimator is first order only".into(),
                                ));
                            }
                            Estimator::ClosedLoop(ClosedLoopEstimator::new(
                                estimator.tau(s.period).unwrap(),
                                s.period,
                                *alpha,
                                *kp,
                            )?)
                        }
                        EstimatorConfig::Oracle => Estimator::Oracle,
                    };
                    let deriv = if *kd != 0.0 {
                        Some(DerivativeEstimator::new(s.period, *derivative_filter)?)
                    } else {
                        None
                    };
                    Controller::Intelligent { ctl, est, deriv }
                }
                ControllerConfig::Adrc {
                    n,
                    a,
                    omega_o,
                    omega_c,
                    warmup,
                } => {
                    if *n > 2 {
                        return Err(MfcError::Config("references provide derivatives up to order 2".into()));
                    }
                    Controller::Adrc {
                        ctl: build_adrc(*n, *a, *omega_o, *omega_c, *warmup)?,
                        saturation: cfg.saturation,
                    }
                }
            };
            Ok(Loop {
                ctl,
                reference: cfg.reference.build(s.horizon)?,
                noise: NoiseStream::new(s.seed, i as u64),
                u_prev: u_initial,
                trace: LoopTrace::default(),
            })
        })
        .collect()
}

/// Runs a scenario to its horizon. Divergence truncates the series and sets
/// its flag; configuration problems are errors.
pub fn run_scenario(s: &Scenario) -> Result<TimeSeries> {
    s.validate()?;
    let mut plant = s.plant.build(s.period)?;
    let mut loops = build_loops(s)?;
    let steps = s.steps();
    let mut ts = TimeSeries {
        name: s.name.clone(),
        horizon: s.horizon,
        t: Vec::with_capacity(steps + 1),
        loops: Vec::new(),
        field: plant.field().map(|_| Vec::with_capacity(steps + 1)),
        diverged: false,
    };
    let mut u = vec![0.0; loops.len()];

    for k in 0..=steps {
        let t = k as f64 * s.period;
        let y_true = plant.outputs();
        let fault = (|| -> std::result::Result<(), StepFault> {
            for (i, lp) in loops.iter_mut().enumerate() {
                let y_meas = y_true[i] + lp.noise.gaussian(s.noise_std);
                let r = lp.reference.eval(t)?;
                let e = y_meas - r.value;
                let (ui, f) = control(lp, &plant, s.period, t, y_meas, e, &r)?;
                u[i] = ui;
                let tr = &mut lp.trace;
                tr.y_ref.push(r.value);
                tr.y_true.push(y_true[i]);
                tr.y_meas.push(y_meas);
                tr.u.push(ui);
                tr.e.push(e);
                tr.f_est.push(f);
            }
            Ok(())
        })();
        match fault {
            Ok(()) => {}
            Err(StepFault::Diverged) => {
                // drop the partial row
                for lp in loops.iter_mut() {
                    truncate(&mut lp.trace, ts.t.len());
                }
                ts.diverged = true;
                break;
            }
            Err(StepFault::Fatal(e)) => return Err(e),
        }
        ts.t.push(t);
        if let (Some(rows), Some(w)) = (ts.field.as_mut(), plant.field()) {
            rows.push(w);
        }
        if k == steps {
            break;
        }
        match plant.step(&u, s.period) {
            Ok(()) => {}
            Err(MfcError::Divergence { .. }) => {
                ts.diverged = true;
                break;
            }
            Err(e) => return Err(e),
        }
        for (lp, ui) in loops.iter_mut().zip(&u) {
            lp.u_prev = *ui;
        }
    }
    ts.loops = loops.into_iter().map(|l| l.trace).collect();
    Ok(ts)
}

fn truncate(tr: &mut LoopTrace, n: usize) {
    for col in [
        &mut tr.y_ref,
        &mut tr.y_true,
        &mut tr.y_meas,
        &mut tr.u,
        &mut tr.e,
        &mut tr.f_est,
    ] {
        col.truncate(n);
    }
}

/// Command for one loop and the disturbance estimate it used.
fn control(
    lp: &mut Loop,
    plant: &AnyPlant<f64>,
    period: f64,
    t: f64,
    y_meas: f64,
    e: f64,
    r: &RefPoint<f64>,
) -> std::result::Result<(f64, f64), StepFault> {
    match &mut lp.ctl {
        Controller::Intelligent { ctl, est, deriv } => {
            let f = match est {
                Estimator::Algebraic(a) => {
                    a.push(t, y_meas, lp.u_prev)?;
                    a.estimate_or_zero()?
                }
                Estimator::ClosedLoop(c) => c.estimate_or_zero()?,
                Estimator::Oracle => {
                    let v = r.rate - ctl.gains.kp * e;
                    let bounds = ctl.saturation.map(|s| (s.min, s.max));
                    let u_star = oracle_input(plant, period, period * v, lp.u_prev, bounds)?;
                    v - ctl.model.alpha() * u_star
                }
            };
            let e_dot = match deriv {
                Some(d) => d.update(e).unwrap_or(0.0),
                None => 0.0,
            };
            let cmd = ctl.update(t, e, e_dot, r.derivative(ctl.model.nu()), f)?;
            if let Estimator::ClosedLoop(c) = est {
                c.push(LoopSample {
                    t,
                    e,
                    u: cmd.u,
                    ref_rate: r.rate,
                })?;
            }
            Ok((cmd.u, f))
        }
        Controller::Adrc { ctl, saturation } => {
            let n = ctl.eso.form().n();
            let reference = [r.value, r.rate, r.accel];
            let mut u = ctl.control(&reference[..=n])?;
            if let Some(s) = saturation {
                u = s.apply(u).0;
            }
            let f = ctl.eso.disturbance();
            ctl.observe(y_meas, u, period)?;
            Ok((u, f))
        }
    }
}

/// Input `u` whose hold over the next period moves the (single) output by
/// `target`, found on a clone of the plant.
///
/// With this input, `Δy/Te − α·u` is the disturbance averaged over the hold
/// interval, and the iP law fed that value returns the same `u`.
pub fn oracle_input(
    plant: &AnyPlant<f64>,
    period: f64,
    target: f64,
    guess: f64,
    bounds: Option<(f64, f64)>,
) -> Result<f64> {
    let y0 = plant.outputs()[0];
    let resid = |u: f64| -> Option<f64> {
        let mut p = plant.clone();
        p.step(&[u], period).ok()?;
        let r = p.outputs()[0] - y0 - target;
        r.is_finite().then_some(r)
    };
    let (lo, hi) = bounds.unwrap_or((-1e6, 1e6));
    let fail = || MfcError::Divergence {
        what: "oracle input search",
        t: plant.time(),
    };
    let mut a = guess.clamp(lo, hi);
    let mut ra = resid(a).ok_or_else(fail)?;
    if ra == 0.0 {
        return Ok(a);
    }
    let h = 1e-6 * a.abs().max(1.0);
    let probe = if a + h <= hi { a + h } else { a - h };
    let rp = resid(probe).ok_or_else(fail)?;
    let rising = (rp > ra) == (probe > a);
    let dir = if (ra > 0.0) == rising { -1.0 } else { 1.0 };

    let mut step = 0.01 * a.abs().max(1.0);
    let mut b;
    let mut rb;
    let mut tries = 0;
    loop {
        tries += 1;
        if tries > 400 {
            return Err(fail());
        }
        b = (a + dir * step).clamp(lo, hi);
        // an evaluation that fails or loses ground (e.g. past a pole) shrinks the step
        match resid(b).filter(|r| (*r > 0.0) != (ra > 0.0) || r.abs() < ra.abs()) {
            None => {
                step *= 0.5;
                if step < 1e-12 * a.abs().max(1.0) {
                    return Ok(a);
                }
            }
            Some(r) if (r > 0.0) != (ra > 0.0) => {
                rb = r;
                break;
            }
            Some(r) => {
                if b == lo || b == hi {
                    // unreachable target: saturate
                    return Ok(b);
                }
                a = b;
                ra = r;
                step *= 2.0;
            }
        }
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let Some(rm) = resid(m) else { break };
        if (rm > 0.0) == (ra > 0.0) {
            a = m;
            ra = rm;
        } else {
            b = m;
            rb = rm;
        }
    }
    Ok(if ra.abs() <= rb.abs() { a } else { b })
}
