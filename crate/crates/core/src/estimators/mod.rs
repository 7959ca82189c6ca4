//! Real-time estimators of the total disturbance `F` and of the error
//! derivative.

pub mod closed_loop;
pub mod derivative;
pub mod fir;
pub mod window;

pub use closed_loop::{estimate_f_closedloop, ClosedLoopEstimator};
pub use derivative::{estimate_error_derivative, DerivativeEstimator};
pub use fir::{build_fir_weights, estimate_f_algebraic, AlgebraicEstimator, FirWeights};
pub use window::{IoSample, LoopSample, SampleWindow, Timed};
