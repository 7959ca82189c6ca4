//! Reference trajectories `y*(t)` with analytic first and second derivatives.

use crate::scalar::Real;
use crate::{MfcError, Result};

/// `(y*, ẏ*, ÿ*)` at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefPoint<T> {
    pub value: T,
    pub rate: T,
    pub accel: T,
}

impl<T: Real> RefPoint<T> {
    /// The ν-th derivative (ν = 0, 1 or 2).
    pub fn derivative(&self, order: u8) -> T {
        match order {
            0 => self.value,
            1 => self.rate,
            _ => self.accel,
        }
    }
}

/// Quintic transition with zero first and second derivatives at both ends:
/// `y = y0 + (y1 − y0)·(10s³ − 15s⁴ + 6s⁵)`, `s = (t − t0)/(t1 − t0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BezierSegment<T> {
    pub t0: T,
    pub t1: T,
    pub y_start: T,
    pub y_end: T,
}

impl<T: Real> BezierSegment<T> {
    fn eval(&self, t: T) -> RefPoint<T> {
        let d = self.t1 - self.t0;
        let s = ((t - self.t0) / d).max(T::zero()).min(T::one());
        let dy = self.y_end - self.y_start;
        let (s2, s3) = (s * s, s * s * s);
        let c = |v: f64| T::lit(v);
        let shape = c(10.0) * s3 - c(15.0) * s3 * s + c(6.0) * s3 * s2;
        let shape_d = c(30.0) * s2 - c(60.0) * s3 + c(30.0) * s2 * s2;
        let shape_dd = c(60.0) * s - c(180.0) * s2 + c(120.0) * s3;
        RefPoint {
            value: self.y_start + dy * shape,
            rate: dy * shape_d / d,
            accel: dy * shape_dd / (d * d),
        }
    }
}

/// Critically damped second-order response toward `target`, started from
/// `(start_value, start_rate)` at the segment start:
/// `y(s) = target + (A + B·s)·e^{−s/T}`, `A = y0 − target`, `B = v0 + A/T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilteredStep<T> {
    pub start_value: T,
    pub start_rate: T,
    pub target: T,
    pub time_constant: T,
}

impl<T: Real> FilteredStep<T> {
    fn eval(&self, s: T) -> RefPoint<T> {
        let tc = self.time_constant;
        let a = self.start_value - self.target;
        let b = self.start_rate + a / tc;
        let ex = (-s / tc).exp();
        let p = a + b * s;
        let rate = (b - p / tc) * ex;
        let accel = (-T::lit(2.0) * b / tc + p / (tc * tc)) * ex;
        RefPoint {
            value: self.target + p * ex,
            rate,
            accel,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment<T> {
    Hold(T),
    Bezier(BezierSegment<T>),
    Filtered(FilteredStep<T>),
}

/// Contiguous segments covering `[start, end]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceProfile<T> {
    /// `(t0, t1, segment)`, sorted and contiguous.
    segments: Vec<(T, T, Segment<T>)>,
}

impl<T: Real> ReferenceProfile<T> {
    pub fn new(segments: Vec<(T, T, Segment<T>)>) -> Result<Self> {
        if segments.is_empty() {
            return Err(MfcError::Config("reference profile needs at least one segment".into()));
        }
        for (t0, t1, _) in &segments {
            if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
                return Err(MfcError::Config(format!("segment span [{t0}, {t1}] is empty")));
            }
        }
        let profile = Self { segments };
        for pair in profile.segments.windows(2) {
            let (_, end, seg) = pair[0];
            let (start, _, next) = pair[1];
            let tol = T::lit(1e-9) * end.abs().max(T::one());
            if (start - end).abs() > tol {
                return Err(MfcError::Config(format!("segments not contiguous at t={end}")));
            }
            let a = eval_segment(&seg, pair[0].0, end).value;
            let b = eval_segment(&next, start, start).value;
            if (a - b).abs() > T::lit(1e-9) * a.abs().max(T::one()) {
                return Err(MfcError::Config(format!(
                    "reference jumps from {a} to {b} at t={end}"
                )));
            }
        }
        Ok(profile)
    }

    pub fn constant(value: T, start: T, end: T) -> Result<Self> {
        Self::new(vec![(start, end, Segment::Hold(value))])
    }

    /// Holds and quintic transitions through `(time, value)` waypoints:
    /// the output moves from waypoint `i` to `i + 1` during `move_time`
    /// ending at waypoint `i + 1`'s time, and holds otherwise.
    pub fn bezier_path(waypoints: &[(T, T)], move_time: T, end: T) -> Result<Self> {
        let (&(t_first, y_first), rest) = waypoints
            .split_first()
            .ok_or_else(|| MfcError::Config("bezier path needs waypoints".into()))?;
        let mut segs = Vec::new();
        let (mut t, mut y) = (t_first, y_first);
        for &(tw, yw) in rest {
            let t_move = tw - move_time;
            if t_move < t {
                return Err(MfcError::Config(format!(
                    "waypoint at t={tw} leaves less than {move_time} for the transition"
                )));
            }
            if t_move > t {
                segs.push((t, t_move, Segment::Hold(y)));
            }
            segs.push((
                t_move,
                tw,
                Segment::Bezier(BezierSegment {
                    t0: t_move,
                    t1: tw,
                    y_start: y,
                    y_end: yw,
                }),
            ));
            t = tw;
            y = yw;
        }
        if end > t {
            segs.push((t, end, Segment::Hold(y)));
        }
        Self::new(segs)
    }

    pub fn start(&self) -> T {
        self.segments[0].0
    }

    pub fn end(&self) -> T {
        self.segments[self.segments.len() - 1].1
    }

    pub fn segments(&self) -> &[(T, T, Segment<T>)] {
        &self.segments
    }

    pub fn eval(&self, t: T) -> Result<RefPoint<T>> {
        eval_reference(self, t)
    }
}

fn eval_segment<T: Real>(seg: &Segment<T>, t0: T, t: T) -> RefPoint<T> {
    match seg {
        Segment::Hold(v) => RefPoint {
            value: *v,
            rate: T::zero(),
            accel: T::zero(),
        },
        Segment::Bezier(b) => b.eval(t),
        Segment::Filtered(f) => f.eval(t - t0),
    }
}

/// `(y*, ẏ*, ÿ*)` at `t`. At a joint the later segment wins.
pub fn eval_reference<T: Real>(profile: &ReferenceProfile<T>, t: T) -> Result<RefPoint<T>> {
    let (start, end) = (profile.start(), profile.end());
    let slack = T::lit(1e-9) * end.abs().max(T::one());
    if !(t >= start - slack && t <= end + slack) {
        return Err(MfcError::OutOfRange {
            t: t.as_f64(),
            start: start.as_f64(),
            end: end.as_f64(),
        });
    }
    let idx = profile.segments.partition_point(|(t0, _, _)| *t0 <= t).max(1) - 1;
    let (t0, _, seg) = &profile.segments[idx];
    Ok(eval_segment(seg, *t0, t))
}

/// Piecewise-constant setpoints `(time, value)` ending at `end`.
///
/// With `smoothing > 0` each change runs through a critically damped
/// second-order filter (state carried across changes, so value and rate
/// stay continuous). With `smoothing == 0` the profile is a pure staircase
/// whose rate is declared zero between jumps.
pub fn staircase<T: Real>(levels: &[(T, T)], smoothing: T, end: T) -> Result<ReferenceProfile<T>> {
    if levels.is_empty() {
        return Err(MfcError::Config("staircase needs at least one level".into()));
    }
    if levels.windows(2).any(|p| !(p[1].0 > p[0].0)) {
        return Err(MfcError::Config("staircase times must be strictly increasing".into()));
    }
    if !(smoothing >= T::zero()) {
        return Err(MfcError::Config(format!("smoothing must be >= 0, got {smoothing}")));
    }
    let last_t = levels[levels.len() - 1].0;
    if !(end > last_t) {
        return Err(MfcError::Config(format!("staircase end {end} must follow the last level at {last_t}")));
    }
    let bounds: Vec<T> = levels.iter().map(|l| l.0).skip(1).chain(std::iter::once(end)).collect();

    if smoothing == T::zero() {
        let segs = levels
            .iter()
            .zip(&bounds)
            .map(|(&(t0, v), &t1)| (t0, t1, Segment::Hold(v)))
            .collect();
        // jumps are allowed here, so skip the continuity check
        return Ok(ReferenceProfile { segments: segs });
    }

    let mut segs = Vec::with_capacity(levels.len());
    let (t0, v0) = levels[0];
    segs.push((t0, bounds[0], Segment::Hold(v0)));
    let mut state = RefPoint {
        value: v0,
        rate: T::zero(),
        accel: T::zero(),
    };
    for (&(t_j, target), &t_next) in levels.iter().zip(&bounds).skip(1) {
        let step = FilteredStep {
            start_value: state.value,
            start_rate: state.rate,
            target,
            time_constant: smoothing,
        };
        segs.push((t_j, t_next, Segment::Filtered(step)));
        state = step.eval(t_next - t_j);
    }
    ReferenceProfile::new(segs)
}
