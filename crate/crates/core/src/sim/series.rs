//! Logged trajectories and the summary metrics computed from them.

use serde::{Deserialize, Serialize};

use crate::{MfcError, Result};

/// Share of the horizon excluded from the tail metrics.
pub const TAIL_SKIP: f64 = 0.2;

/// Per-loop columns, one entry per logged row.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LoopTrace {
    pub y_ref: Vec<f64>,
    pub y_true: Vec<f64>,
    pub y_meas: Vec<f64>,
    pub u: Vec<f64>,
    /// Measured tracking error `y_meas − y*`, as seen by the controller.
    pub e: Vec<f64>,
    pub f_est: Vec<f64>,
}

impl LoopTrace {
    /// Noise-free tracking error `y_true − y*`.
    pub fn true_error(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.y_true.iter().zip(&self.y_ref).map(|(y, r)| y - r)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub name: String,
    /// Nominal end time; shorter than the last row when the run diverged.
    pub horizon: f64,
    pub t: Vec<f64>,
    pub loops: Vec<LoopTrace>,
    /// Full spatial profile per row, for distributed plants.
    pub field: Option<Vec<Vec<f64>>>,
    pub diverged: bool,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn period(&self) -> Option<f64> {
        (self.t.len() >= 2).then(|| self.t[1] - self.t[0])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopMetrics {
    /// RMS of the true tracking error over the final 80% of the horizon.
    pub rmse_tail: f64,
    pub max_abs_e: f64,
    /// `Σ u²·Te`.
    pub control_energy: f64,
    /// `max y* − min y*`.
    pub reference_amplitude: f64,
    /// Largest drift of this loop's error while another loop's setpoint moves
    /// and this loop's setpoint holds. `None` for single loops or when no such
    /// interval exists.
    pub cross_coupling: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub loops: Vec<LoopMetrics>,
    pub diverged: bool,
}

pub fn compute_metrics(ts: &TimeSeries) -> Result<Metrics> {
    if ts.is_empty() || ts.loops.is_empty() {
        return Err(MfcError::Config("cannot compute metrics of an empty series".into()));
    }
    let period = ts.period().unwrap_or(ts.horizon);
    let nominal_rows = (ts.horizon / period).round();
    let tail_start = (TAIL_SKIP * nominal_rows + 1e-9).floor() as usize + 1;
    let moving = if ts.loops.len() > 1 { moving_rows(ts) } else { Vec::new() };
    let intervals = move_intervals(&moving, ts.len());

    let loops = ts
        .loops
        .iter()
        .enumerate()
        .map(|(j, lp)| {
            let e: Vec<f64> = lp.true_error().collect();
            let tail = e.get(tail_start.min(e.len())..).unwrap_or(&[]);
            let rmse_tail = if tail.is_empty() {
                f64::NAN
            } else {
                (tail.iter().map(|v| v * v).sum::<f64>() / tail.len() as f64).sqrt()
            };
            let (lo, hi) = lp
                .y_ref
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
            LoopMetrics {
                rmse_tail,
                max_abs_e: e.iter().fold(0.0, |m, v| m.max(v.abs())),
                control_energy: lp.u.iter().map(|u| u * u).sum::<f64>() * period,
                reference_amplitude: hi - lo,
                cross_coupling: cross_coupling(j, &e, &moving, &intervals),
            }
        })
        .collect();
    Ok(Metrics {
        loops,
        diverged: ts.diverged,
    })
}

/// Rows where each loop's reference is moving: the slope exceeds 1% of that
/// loop's peak slope.
fn moving_rows(ts: &TimeSeries) -> Vec<Vec<bool>> {
    ts.loops
        .iter()
        .map(|lp| {
            let d: Vec<f64> = lp.y_ref.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
            let peak = d.iter().fold(0.0f64, |m, v| m.max(*v));
            d.iter().map(|v| peak > 0.0 && *v > 0.01 * peak).collect()
        })
        .collect()
}

/// `(mover, start_row, end_row)`: a setpoint move begins where a loop starts
/// moving, and the interval runs to the next move of any loop (or the end of
/// the series).
fn move_intervals(moving: &[Vec<bool>], rows: usize) -> Vec<(usize, usize, usize)> {
    let mut starts: Vec<(usize, usize)> = Vec::new();
    for (i, m) in moving.iter().enumerate() {
        for k in 0..m.len() {
            if m[k] && (k == 0 || !m[k - 1]) {
                starts.push((k, i));
            }
        }
    }
    starts.sort_unstable();
    starts
        .iter()
        .enumerate()
        .map(|(n, &(k, i))| {
            let end = starts[n + 1..]
                .iter()
                .map(|s| s.0)
                .find(|&s| s > k)
                .unwrap_or(rows - 1);
            (i, k, end)
        })
        .collect()
}

fn cross_coupling(
    j: usize,
    e: &[f64],
    moving: &[Vec<bool>],
    intervals: &[(usize, usize, usize)],
) -> Option<f64> {
    let mut worst: Option<f64> = None;
    for &(mover, a, b) in intervals {
        // only while this loop's own setpoint holds
        if mover == j || moving[j][a..b].iter().any(|m| *m) {
            continue;
        }
        let drift = e[a..=b].iter().fold(0.0f64, |m, v| m.max((v - e[a]).abs()));
        worst = Some(worst.map_or(drift, |w| w.max(drift)));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(t: Vec<f64>, loops: Vec<LoopTrace>) -> TimeSeries {
        TimeSeries {
            name: "t".into(),
            horizon: *t.last().unwrap(),
            t,
            loops,
            field: None,
            diverged: false,
        }
    }

    fn trace(y_ref: Vec<f64>, y_true: Vec<f64>) -> LoopTrace {
        let n = y_ref.len();
        LoopTrace {
            e: y_true.iter().zip(&y_ref).map(|(y, r)| y - r).collect(),
            y_meas: y_true.clone(),
            y_ref,
            y_true,
            u: vec![0.0; n],
            f_est: vec![0.0; n],
        }
    }

    fn grid(n: usize, dt: f64) -> Vec<f64> {
        (0..n).map(|k| k as f64 * dt).collect()
    }

    #[test]
    fn zero_error() {
        let t = grid(101, 0.1);
        let m = compute_metrics(&series(t, vec![trace(vec![1.0; 101], vec![1.0; 101])])).unwrap();
        assert_eq!(m.loops[0].rmse_tail, 0.0);
        assert_eq!(m.loops[0].max_abs_e, 0.0);
        assert_eq!(m.loops[0].cross_coupling, None);
    }

    #[test]
    fn constant_error() {
        let t = grid(101, 0.1);
        let m = compute_metrics(&series(t, vec![trace(vec![0.0; 101], vec![0.1; 101])])).unwrap();
        assert!((m.loops[0].rmse_tail - 0.1).abs() < 1e-15);
    }

    #[test]
    fn sine_tail_rms() {
        // tail (2, 10] holds exactly 8 periods of unit-period sine
        let n = 10_001;
        let t: Vec<f64> = (0..n).map(|k| k as f64 * 10.0 / (n - 1) as f64).collect();
        let e: Vec<f64> = t.iter().map(|s| (2.0 * std::f64::consts::PI * s).sin()).collect();
        let m = compute_metrics(&series(t, vec![trace(vec![0.0; n], e)])).unwrap();
        assert!((m.loops[0].rmse_tail - 0.5f64.sqrt()).abs() < 1e-6, "{}", m.loops[0].rmse_tail);
    }

    #[test]
    fn energy_and_amplitude() {
        let t = grid(11, 0.5);
        let mut tr = trace((0..11).map(|k| k as f64 * 0.1).collect(), vec![0.0; 11]);
        tr.u = vec![2.0; 11];
        let m = compute_metrics(&series(t, vec![tr])).unwrap();
        assert!((m.loops[0].control_energy - 11.0 * 4.0 * 0.5).abs() < 1e-12);
        assert!((m.loops[0].reference_amplitude - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_series_is_rejected() {
        assert!(compute_metrics(&series(vec![0.0], vec![])).is_err());
        let empty = TimeSeries {
            name: "e".into(),
            horizon: 1.0,
            t: vec![],
            loops: vec![LoopTrace::default()],
            field: None,
            diverged: false,
        };
        assert!(compute_metrics(&empty).is_err());
    }

    #[test]
    fn coupling_measured_only_while_the_other_loop_moves() {
        let n = 40;
        let t = grid(n, 1.0);
        // loop 1 moves at rows 10..12, loop 2 moves at rows 30..32
        let r1: Vec<f64> = (0..n).map(|k| if k <= 10 { 0.0 } else if k >= 12 { 1.0 } else { 0.5 }).collect();
        let r2: Vec<f64> = (0..n).map(|k| if k <= 30 { 0.3 } else { 0.6 }).collect();
        let mut y2 = r2.clone();
        y2[15] += 0.05;
        y2[35] += 0.5; // during its own move: ignored for loop 2
        let mut y1 = r1.clone();
        y1[33] -= 0.02;
        let m = compute_metrics(&series(t, vec![trace(r1.clone(), y1), trace(r2, y2)])).unwrap();
        assert!((m.loops[1].cross_coupling.unwrap() - 0.05).abs() < 1e-12);
        assert!((m.loops[0].cross_coupling.unwrap() - 0.02).abs() < 1e-12);
    }
}
