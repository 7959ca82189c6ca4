//! Built-in scenarios.
//!
//! Controller parameters, noise levels and sampling periods are the standard
//! benchmark values. Reference shapes, horizons and window lengths are our
//! own choices and can be changed freely in a scenario file.

use crate::sim::config::{
    ControllerConfig, EstimatorConfig, LoopConfig, PlantConfig, ReferenceConfig, Scenario, SCHEMA_VERSION,
};
use crate::ultralocal::Saturation;
use crate::{MfcError, Result};

pub const DEFAULT_SEED: u64 = 2013;

const NAMES: [&str; 10] = [
    "linear",
    "case1",
    "case2",
    "case3",
    "case4",
    "three_tank",
    "heat",
    "oscillator_ipd",
    "oscillator_adrc",
    "case4_adrc",
];

pub fn preset_names() -> &'static [&'static str] {
    &NAMES
}

fn ip(nu: u8, alpha: f64, kp: f64, tau: Option<f64>) -> ControllerConfig {
    ControllerConfig::Intelligent {
        nu,
        alpha,
        kp,
        ki: 0.0,
        kd: 0.0,
        estimator: EstimatorConfig::Algebraic { tau },
        derivative_filter: None,
    }
}

#[allow(clippy::too_many_arguments)]
fn single(
    name: &str,
    description: &str,
    period: f64,
    horizon: f64,
    noise_std: f64,
    plant: PlantConfig,
    controller: ControllerConfig,
    reference: ReferenceConfig,
) -> Scenario {
    Scenario {
        schema_version: SCHEMA_VERSION,
        name: name.into(),
        description: description.into(),
        period,
        horizon,
        seed: DEFAULT_SEED,
        noise_std,
        plant,
        loops: vec![LoopConfig {
            controller,
            reference,
            saturation: None,
        }],
    }
}

fn stairs(levels: &[(f64, f64)], smoothing: f64) -> ReferenceConfig {
    ReferenceConfig::Staircase {
        levels: levels.to_vec(),
        smoothing,
    }
}

/// Reference shared by the oscillator comparison presets.
fn oscillator_reference() -> ReferenceConfig {
    stairs(&[(0.0, 0.0), (2.0, 1.0), (10.0, -0.5), (18.0, 0.5)], 0.4)
}

/// Reference shared by the Case 4 presets.
fn case4_reference() -> ReferenceConfig {
    stairs(&[(0.0, 1.0), (4.0, 2.0), (7.0, 1.5)], 1.0)
}

pub fn preset(name: &str) -> Result<Scenario> {
    let te = 0.01;
    let s = match name {
        "linear" => single(
            name,
            "unstable non-flat linear plant (s+2)^2/((s-2)(s-1)(s+1)), iP, quintic reference",
            te,
            20.0,
            0.01,
            PlantConfig::TransferFunction {
                numerator: vec![1.0, 4.0, 4.0],
                denominator: vec![1.0, -2.0, -1.0, 2.0],
                initial_state: None,
            },
            ip(1, 1.0, 1.0, Some(0.1)),
            ReferenceConfig::Bezier {
                waypoints: vec![(0.0, 0.0), (5.0, 1.0), (12.0, -0.5), (18.0, 0.0)],
                move_time: 3.0,
            },
        ),
        "case1" => single(
            name,
            "y' - y = sign(u) sqrt|u|, iP",
            te,
            10.0,
            0.05,
            PlantConfig::Case1 { y0: 2.0 },
            ip(1, 0.1, 1.0, Some(0.1)),
            stairs(&[(0.0, 2.0), (2.0, 4.0), (6.0, 3.0)], 0.6),
        ),
        "case2" => single(
            name,
            "y'' - 1.5 y' - y = (u + u')^3 with a smoothed input, iP",
            te,
            10.0,
            0.01,
            PlantConfig::Case2 {
                y0: 0.0,
                dy0: 0.0,
                smoothing: None,
            },
            ip(1, 10.0, 10.0, Some(0.1)),
            stairs(&[(0.0, 0.0), (2.0, 1.0), (6.0, 0.5)], 1.0),
        ),
        "case3" => single(
            name,
            "y'' + 3 y' + 2 y = sign(u) 10^|u|, iP",
            te,
            10.0,
            0.01,
            PlantConfig::Case3 { y0: 0.0, dy0: 0.0 },
            ip(1, 10.0, 1.0, Some(0.05)),
            stairs(&[(0.0, 0.0), (2.0, 2.0), (6.0, 1.0)], 1.0),
        ),
        "case4" => single(
            name,
            "y' - y = (0.5 y' + y) u from y(0) = 0.2, iP",
            te,
            10.0,
            0.05,
            PlantConfig::Case4 { y0: 0.2 },
            ip(1, 5.0, 3.0, Some(0.1)),
            case4_reference(),
        ),
        "three_tank" => {
            let tank = |reference| LoopConfig {
                controller: ip(1, 100.0, 0.5, Some(20.0)),
                reference,
                saturation: Some(Saturation { min: 0.0, max: 1e-4 }),
            };
            Scenario {
                schema_version: SCHEMA_VERSION,
                name: name.into(),
                description: "three-tank system, two parallel iP loops on tanks 1 and 2".into(),
                period: 1.0,
                horizon: 3000.0,
                seed: DEFAULT_SEED,
                noise_std: 0.5e-3,
                plant: PlantConfig::ThreeTank { levels: [0.0; 3] },
                loops: vec![
                    tank(stairs(&[(0.0, 0.0), (50.0, 0.3), (1000.0, 0.5), (2000.0, 0.35)], 40.0)),
                    tank(stairs(&[(0.0, 0.0), (50.0, 0.2), (1500.0, 0.3), (2500.0, 0.15)], 40.0)),
                ],
            }
        }
        "heat" => single(
            name,
            "heat equation with boundary control, sensor at x = 1/3, iP",
            te,
            10.0,
            0.01,
            PlantConfig::Heat {
                nodes: 98,
                left_bc: 0.5,
                u0: 0.5,
                sensor_x: 1.0 / 3.0,
            },
            ip(1, 10.0, 10.0, Some(0.05)),
            stairs(&[(0.0, 0.5), (1.0, 0.8), (5.0, 0.6)], 1.0),
        ),
        "oscillator_ipd" => single(
            name,
            "y'' = -y + u + w with an iPD on a second-order ultra-local model",
            te,
            25.0,
            0.01,
            PlantConfig::Oscillator {
                y0: 0.0,
                dy0: 0.0,
                disturbance: 0.3,
            },
            ControllerConfig::Intelligent {
                nu: 2,
                alpha: 1.0,
                kp: 4.0,
                ki: 0.0,
                kd: 4.0,
                estimator: EstimatorConfig::Algebraic { tau: None },
                derivative_filter: Some(0.02),
            },
            oscillator_reference(),
        ),
        "oscillator_adrc" => single(
            name,
            "y'' = -y + u + w with baseline ADRC (linear ESO)",
            te,
            25.0,
            0.01,
            PlantConfig::Oscillator {
                y0: 0.0,
                dy0: 0.0,
                disturbance: 0.3,
            },
            ControllerConfig::Adrc {
                n: 2,
                a: 1.0,
                omega_o: 20.0,
                omega_c: 2.0,
                warmup: 0,
            },
            oscillator_reference(),
        ),
        "case4_adrc" => single(
            name,
            "Case 4 under baseline ADRC (linear ESO), report only",
            te,
            10.0,
            0.05,
            PlantConfig::Case4 { y0: 0.2 },
            ControllerConfig::Adrc {
                n: 1,
                a: 5.0,
                omega_o: 20.0,
                omega_c: 3.0,
                warmup: 0,
            },
            case4_reference(),
        ),
        other => {
            return Err(MfcError::Config(format!(
                "unknown preset {other:?}; available: {}",
                NAMES.join(", ")
            )))
        }
    };
    Ok(s)
}
