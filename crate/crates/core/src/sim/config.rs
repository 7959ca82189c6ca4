//! Scenario description, serialised as versioned JSON.

use serde::{Deserialize, Serialize};

use crate::adrc::{AdrcController, AdrcGains, AdrcPlantForm, Eso};
use crate::plants::{
    realize_transfer_function, AnyPlant, HeatPlant, OdeCase, OdePlant, Plant, ThreeTankParams, ThreeTankPlant,
};
use crate::trajectory::{staircase, ReferenceProfile};
use crate::ultralocal::{Gains, Saturation, UltraLocalModel};
use crate::{MfcError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Windows default to this many control periods.
pub const DEFAULT_WINDOW_PERIODS: f64 = 20.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    pub name: String,
    #[serde(default)]
    pub description: String,
    /// Control period `Te`.
    pub period: f64,
    pub horizon: f64,
    pub seed: u64,
    /// Standard deviation of the additive output noise.
    pub noise_std: f64,
    pub plant: PlantConfig,
    /// One loop per plant output, in output order.
    pub loops: Vec<LoopConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PlantConfig {
    /// Coefficients with the highest power of `s` first.
    TransferFunction {
        numerator: Vec<f64>,
        denominator: Vec<f64>,
        #[serde(default)]
        initial_state: Option<Vec<f64>>,
    },
    Case1 {
        y0: f64,
    },
    Case2 {
        y0: f64,
        #[serde(default)]
        dy0: f64,
        /// Time constant of the input smoother; defaults to two periods.
        #[serde(default)]
        smoothing: Option<f64>,
    },
    Case3 {
        y0: f64,
        #[serde(default)]
        dy0: f64,
    },
    Case4 {
        y0: f64,
    },
    Oscillator {
        y0: f64,
        #[serde(default)]
        dy0: f64,
        disturbance: f64,
    },
    ThreeTank {
        levels: [f64; 3],
    },
    Heat {
        nodes: usize,
        left_bc: f64,
        u0: f64,
        sensor_x: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopConfig {
    pub controller: ControllerConfig,
    pub reference: ReferenceConfig,
    #[serde(default)]
    pub saturation: Option<Saturation<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ControllerConfig {
    /// iP, iPI, iPD or iPID, depending on which gains are non-zero.
    Intelligent {
        nu: u8,
        alpha: f64,
        kp: f64,
        #[serde(default)]
        ki: f64,
        #[serde(default)]
        kd: f64,
        estimator: EstimatorConfig,
        /// Low-pass time constant on the error derivative.
        #[serde(default)]
        derivative_filter: Option<f64>,
    },
    Adrc {
        n: usize,
        a: f64,
        omega_o: f64,
        omega_c: f64,
        /// Periods during which the observer runs with `u = 0`.
        #[serde(default)]
        warmup: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EstimatorConfig {
    Algebraic {
        #[serde(default)]
        tau: Option<f64>,
    },
    ClosedLoop {
        #[serde(default)]
        tau: Option<f64>,
    },
    /// Exact disturbance from the simulated plant, averaged over the coming
    /// hold interval. Noise-free SISO first-order loops only.
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ReferenceConfig {
    Constant {
        value: f64,
    },
    /// Quintic transitions reaching each `(time, value)` waypoint.
    Bezier {
        waypoints: Vec<(f64, f64)>,
        move_time: f64,
    },
    Staircase {
        levels: Vec<(f64, f64)>,
        smoothing: f64,
    },
}

impl EstimatorConfig {
    pub fn tau(&self, period: f64) -> Option<f64> {
        match self {
            EstimatorConfig::Algebraic { tau } | EstimatorConfig::ClosedLoop { tau } => {
                Some(tau.unwrap_or(DEFAULT_WINDOW_PERIODS * period))
            }
            EstimatorConfig::Oracle => None,
        }
    }
}

impl ReferenceConfig {
    pub fn build(&self, horizon: f64) -> Result<ReferenceProfile<f64>> {
        match self {
            ReferenceConfig::Constant { value } => ReferenceProfile::constant(*value, 0.0, horizon),
            ReferenceConfig::Bezier { waypoints, move_time } => {
                ReferenceProfile::bezier_path(waypoints, *move_time, horizon)
            }
            ReferenceConfig::Staircase { levels, smoothing } => staircase(levels, *smoothing, horizon),
        }
    }
}

impl PlantConfig {
    pub fn build(&self, period: f64) -> Result<AnyPlant<f64>> {
        Ok(match self {
            PlantConfig::TransferFunction {
                numerator,
                denominator,
                initial_state,
            } => {
                let mut p = realize_transfer_function(numerator, denominator)?;
                if let Some(x0) = initial_state {
                    p = p.with_state(x0)?;
                }
                AnyPlant::Linear(p)
            }
            PlantConfig::Case1 { y0 } => AnyPlant::Ode(OdePlant::new(OdeCase::Case1, &[*y0])?),
            PlantConfig::Case2 { y0, dy0, smoothing } => {
                let smoothing = smoothing.unwrap_or(2.0 * period);
                AnyPlant::Ode(OdePlant::new(OdeCase::Case2 { smoothing }, &[*y0, *dy0, 0.0])?)
            }
            PlantConfig::Case3 { y0, dy0 } => AnyPlant::Ode(OdePlant::new(OdeCase::Case3, &[*y0, *dy0])?),
            PlantConfig::Case4 { y0 } => AnyPlant::Ode(OdePlant::new(OdeCase::Case4, &[*y0])?),
            PlantConfig::Oscillator { y0, dy0, disturbance } => AnyPlant::Ode(OdePlant::new(
                OdeCase::Oscillator {
                    disturbance: *disturbance,
                },
                &[*y0, *dy0],
            )?),
            PlantConfig::ThreeTank { levels } => {
                AnyPlant::ThreeTank(ThreeTankPlant::new(ThreeTankParams::default(), *levels)?)
            }
            PlantConfig::Heat {
                nodes,
                left_bc,
                u0,
                sensor_x,
            } => AnyPlant::Heat(HeatPlant::new(*nodes, *left_bc, *u0, *sensor_x)?),
        })
    }
}

impl Scenario {
    /// Number of control periods; the run logs `steps() + 1` rows.
    pub fn steps(&self) -> usize {
        (self.horizon / self.period).round() as usize
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(MfcError::Config(m));
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return bad(format!("scenario name {:?} is not a plain file stem", self.name));
        }
        if !(self.period > 0.0) || !self.period.is_finite() {
            return bad(format!("period must be > 0, got {}", self.period));
        }
        if !(self.horizon >= 100.0 * self.period) || !self.horizon.is_finite() {
            return bad(format!("horizon {} must cover at least 100 periods", self.horizon));
        }
        let k = self.horizon / self.period;
        if (k - k.round()).abs() > 1e-9 * k {
            return bad(format!("horizon {} is not a multiple of the period {}", self.horizon, self.period));
        }
        if !(self.noise_std >= 0.0) || !self.noise_std.is_finite() {
            return bad(format!("noise_std must be >= 0, got {}", self.noise_std));
        }
        let plant = self.plant.build(self.period)?;
        if plant.n_outputs() != self.loops.len() || plant.n_inputs() != self.loops.len() {
            return bad(format!(
                "plant has {} outputs but {} loops are configured",
                plant.n_outputs(),
                self.loops.len()
            ));
        }
        for (i, l) in self.loops.iter().enumerate() {
            let profile = l.reference.build(self.horizon)?;
            if profile.start() > 0.0 || profile.end() < self.horizon {
                return bad(format!("loop {} reference does not cover [0, {}]", i + 1, self.horizon));
            }
            if let Some(s) = l.saturation {
                Saturation::new(s.min, s.max)?;
            }
            match &l.controller {
                ControllerConfig::Intelligent {
                    nu,
                    alpha,
                    kp,
                    ki,
                    kd,
                    estimator,
                    derivative_filter,
                } => {
                    UltraLocalModel::new(*nu, *alpha)?;
                    Gains::new(*kp, *ki, *kd)?;
                    if let Some(tc) = derivative_filter {
                        if !(*tc > 0.0) {
                            return bad(format!("derivative_filter must be > 0, got {tc}"));
                        }
                    }
                    if let Some(tau) = estimator.tau(self.period) {
                        if !(tau >= 2.0 * self.period) {
                            return Err(MfcError::WindowTooShort { tau, period: self.period });
                        }
                    }
                    if *estimator == EstimatorConfig::Oracle && (*nu != 1 || self.loops.len() != 1) {
                        return bad("the oracle estimator supports single first-order loops only".into());
                    }
                }
                ControllerConfig::Adrc {
                    n,
                    a,
                    omega_o,
                    omega_c,
                    warmup,
                } => {
                    build_adrc(*n, *a, *omega_o, *omega_c, *warmup)?;
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario =
            serde_json::from_str(text).map_err(|e| MfcError::Config(format!("scenario JSON: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialises")
    }
}

pub(crate) fn build_adrc(n: usize, a: f64, omega_o: f64, omega_c: f64, warmup: usize) -> Result<AdrcController<f64>> {
    let form = AdrcPlantForm::new(n, a)?;
    AdrcController::new(Eso::new(form, omega_o)?, AdrcGains::from_bandwidth(n, omega_c)?, warmup)
}
