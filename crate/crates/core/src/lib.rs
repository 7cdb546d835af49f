//! Privacy-aware tabular Q-learning.
//!
//! The learner's reward is penalised by the mutual information between the
//! private state sequence and the emitted action sequence once that
//! information crosses an adaptive threshold. The crate bundles two simulated
//! human-in-the-loop environments, a clustering eavesdropper, baseline
//! mitigations, and a seeded experiment harness.
//!
//! Numeric building blocks are generic over [`Scalar`] (`f32`/`f64`); the
//! aliases below pin them to `f64`, which is what the simulators and the
//! harness use.

pub mod adversary;
pub mod classroom;
pub mod env;
pub mod error;
pub mod harness;
pub mod kv;
pub mod privacy;
pub mod rl;
pub mod rng;
pub mod scalar;
pub mod thermal;

pub use error::{Error, Result};
pub use rl::{ActionId, StateId};
pub use rng::RngStream;
pub use scalar::Scalar;

pub type QTable = rl::QTable<f64>;
pub type ExplorationSchedule = rl::ExplorationSchedule<f64>;
pub type QuadraticFit = privacy::QuadraticFit<f64>;
pub type MiTracker = privacy::MiTracker<f64>;
pub type LambdaSchedule = privacy::LambdaSchedule<f64>;
pub type ClusterModel = adversary::ClusterModel<f64>;
pub type PmvInputs = thermal::pmv::PmvInputs<f64>;
