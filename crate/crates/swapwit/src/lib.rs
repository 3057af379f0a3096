//! Swap-test entanglement witness for two qubits.
//!
//! The gate-level witness, a statevector model of an 8-waveguide photonic
//! implementation with coupler and phase noise, brute-force optimizers that check
//! the analytic extremal claims, and seeded Monte Carlo experiments.
//!
//! The physics modules are generic over [`Real`]; [`oracle`] and [`experiments`]
//! work in `f64`.

// `!(x > 0)` style checks reject NaN on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod linalg;
pub mod oracle;
pub mod photonic;
pub mod qstate;
pub mod scalar;
pub mod witness;

pub use error::{Result, SimError};
pub use scalar::Real;

pub type PureState = qstate::PureTwoQubitState<f64>;
pub type PureState32 = qstate::PureTwoQubitState<f32>;
pub type Density = qstate::DensityMatrix4<f64>;
pub type Density32 = qstate::DensityMatrix4<f32>;
pub type Noise = photonic::NoiseModel<f64>;
pub type Noise32 = photonic::NoiseModel<f32>;
pub type Phases = photonic::PrepPhases<f64>;
pub type Phases32 = photonic::PrepPhases<f32>;
pub type PathState = photonic::PathState8<f64>;
