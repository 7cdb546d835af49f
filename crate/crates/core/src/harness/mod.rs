//! Experiment orchestration: config, the per-step loop, metrics, sweeps and
//! the files they produce.

pub mod attack;
pub mod config;
pub mod export;
pub mod metrics;
pub mod record;
pub mod report;
pub mod run;
pub mod sweep;

pub use attack::{attack_run_dir, AttackReport};
pub use config::{AgentParams, BehaviorSwitch, EnvironmentKind, ExperimentConfig, PrivacyParams, SweepGrid};
pub use export::export_run;
pub use metrics::{compute_metrics, MetricsSummary};
pub use record::{RunRecord, RunRow, ADVERSARY_HEADER, RUN_HEADER};
pub use report::Report;
pub use run::{run_experiment, run_experiment_observed, Phase, RunOutput, StepObserver};
pub use sweep::{run_sweep, SweepRow};
