//! Model-free control toolkit: the ultra-local model, intelligent PID-family
//! controllers, sliding-window algebraic estimators of the lumped
//! disturbance, a linear ADRC baseline, benchmark plants and a seeded
//! simulation harness.
//!
//! The math modules are generic over [`Real`] (`f32` or `f64`); the
//! `…F64` aliases below fix the scalar for the common case. The harness in
//! [`sim`] runs in `f64`.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adrc;
mod error;
pub mod estimators;
pub mod integrate;
pub mod noise;
pub mod plants;
mod scalar;
pub mod sim;
pub mod trajectory;
pub mod ultralocal;

pub use error::{MfcError, Result};
pub use scalar::Real;

pub use adrc::{adrc_control, eso_update, AdrcController, AdrcGains, AdrcPlantForm, Eso};
pub use estimators::{
    estimate_error_derivative, estimate_f_algebraic, estimate_f_closedloop, AlgebraicEstimator,
    ClosedLoopEstimator, DerivativeEstimator, FirWeights,
};
pub use plants::{AnyPlant, Plant};
pub use trajectory::{eval_reference, staircase, ReferenceProfile, RefPoint};
pub use ultralocal::{
    closed_loop_error_rhs, intelligent_control, ControllerKind, Gains, IntelligentController, Order,
    Saturation, UltraLocalModel,
};

pub type UltraLocalModelF64 = UltraLocalModel<f64>;
pub type GainsF64 = Gains<f64>;
pub type IntelligentControllerF64 = IntelligentController<f64>;
pub type AlgebraicEstimatorF64 = AlgebraicEstimator<f64>;
pub type ClosedLoopEstimatorF64 = ClosedLoopEstimator<f64>;
pub type FirWeightsF64 = FirWeights<f64>;
pub type ReferenceProfileF64 = ReferenceProfile<f64>;
pub type EsoF64 = Eso<f64>;
pub type AnyPlantF64 = AnyPlant<f64>;
