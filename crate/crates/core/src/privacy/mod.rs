//! Mutual-information tracking, adaptive λ scheduling and mitigation strategies.

pub mod fit;
pub mod mi;
pub mod mitigation;
pub mod tracker;

pub use fit::{f_max, fit_quadratic, QuadraticFit};
pub use mi::{mi_cap, mutual_information, mutual_information_of, HistoryQueues};
pub use mitigation::{emit_action, emit_action_among, is_penalized, shape_reward, MitigationPolicy};
pub use tracker::{current_lambda, LambdaSchedule, MiTracker, Refit};
