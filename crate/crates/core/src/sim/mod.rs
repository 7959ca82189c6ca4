//! Scenario harness: configuration, presets, the sampled control loop,
//! metrics and CSV logs. Runs in `f64`.

pub mod config;
pub mod csv_io;
pub mod presets;
pub mod runner;
pub mod series;

pub use config::{ControllerConfig, EstimatorConfig, LoopConfig, PlantConfig, ReferenceConfig, Scenario};
pub use csv_io::{emit_csv, read_csv, write_csv};
pub use presets::{preset, preset_names};
pub use runner::run_scenario;
pub use series::{compute_metrics, LoopMetrics, LoopTrace, Metrics, TimeSeries};
