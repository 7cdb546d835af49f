//! One seeded simulation: agent, tracker, mitigation and world, stepped in
//! lockstep.

use crate::adversary::FeatureSpace;
use crate::classroom::ClassroomWorld;
use crate::env::{Environment, StepOutcome};
use crate::error::{Error, Result};
use crate::harness::config::{EnvironmentKind, ExperimentConfig};
use crate::harness::record::{RunRecord, RunRow};
use crate::privacy::{emit_action_among, shape_reward, LambdaSchedule, MiTracker, Refit};
use crate::rl::{greedy_policy, select_action_among, ActionId, ExplorationSchedule, QTable, StateId};
use crate::rng::{RngStream, Stream};
use crate::thermal::activity::schedule_from_blocks;
use crate::thermal::world::ThermalWorld;
use crate::thermal::{Activity, ActivityProfile, HumanId};

/// Points inside a step, in the order they happen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Phase {
    Select,
    Emit,
    Push,
    Mi,
    Refit,
    Lambda,
    Act,
    Shape,
    Observe,
    Update,
}

/// Instrumentation hook; called once per phase actually executed.
pub trait StepObserver {
    fn phase(&mut self, t: u64, phase: Phase);
}

impl StepObserver for () {
    fn phase(&mut self, _: u64, _: Phase) {}
}

impl StepObserver for Vec<(u64, Phase)> {
    fn phase(&mut self, t: u64, phase: Phase) {
        self.push((t, phase));
    }
}

pub enum World {
    Thermal(ThermalWorld),
    Classroom(ClassroomWorld),
}

impl World {
    pub fn build(cfg: &ExperimentConfig) -> Result<Self> {
        let rng = RngStream::for_component(cfg.seed, Stream::Environment);
        match cfg.environment {
            EnvironmentKind::Thermal => {
                let profile = match &cfg.behavior_switch {
                    Some(sw) if sw.step == 0 => profile_for(sw.human, sw.randomness, sw.schedule.as_deref())?,
                    _ => profile_for(cfg.human, cfg.randomness, cfg.schedule.as_deref())?,
                };
                Ok(Self::Thermal(ThermalWorld::new(cfg.thermal.clone(), profile, rng)?))
            }
            EnvironmentKind::Classroom => Ok(Self::Classroom(ClassroomWorld::new(cfg.classroom.clone(), rng)?)),
        }
    }

    fn env(&self) -> &dyn Environment {
        match self {
            Self::Thermal(w) => w,
            Self::Classroom(w) => w,
        }
    }

    fn env_mut(&mut self) -> &mut dyn Environment {
        match self {
            Self::Thermal(w) => w,
            Self::Classroom(w) => w,
        }
    }
}

impl Environment for World {
    fn state_count(&self) -> usize {
        self.env().state_count()
    }

    fn action_count(&self) -> usize {
        self.env().action_count()
    }

    fn current_state(&self) -> StateId {
        self.env().current_state()
    }

    fn legal_actions(&self) -> Vec<ActionId> {
        self.env().legal_actions()
    }

    fn step(&mut self, action: ActionId) -> Result<StepOutcome> {
        self.env_mut().step(action)
    }

    fn slot(&self) -> usize {
        self.env().slot()
    }

    fn slots_per_day(&self) -> usize {
        self.env().slots_per_day()
    }

    fn action_value(&self, action: ActionId) -> f64 {
        self.env().action_value(action)
    }
}

pub fn profile_for(
    human: HumanId,
    randomness: Option<f64>,
    schedule: Option<&[(usize, Activity)]>,
) -> Result<ActivityProfile> {
    let mut profile = ActivityProfile::for_human(human);
    if let Some(blocks) = schedule {
        profile = ActivityProfile::new(human, schedule_from_blocks(blocks)?, profile.randomness)?;
    }
    match randomness {
        Some(r) => profile.with_randomness(r),
        None => Ok(profile),
    }
}

/// The attacker's view of an environment: clock plus set-point for the house,
/// the bare action for the classroom.
pub fn feature_space(cfg: &ExperimentConfig) -> Result<FeatureSpace> {
    let world = World::build(cfg)?;
    let action_values = (0..world.action_count())
        .map(|a| world.action_value(ActionId(a)))
        .collect();
    let slots_per_day = match cfg.environment {
        EnvironmentKind::Thermal => Some(world.slots_per_day()),
        EnvironmentKind::Classroom => None,
    };
    Ok(FeatureSpace {
        slots_per_day,
        action_values,
        action_weight: cfg.adversary.action_weight,
    })
}

/// Greedy policy after the update at `step`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicySnapshot {
    pub step: u64,
    pub policy: Vec<ActionId>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub record: RunRecord,
    /// Greedy policy each time it changed, starting with the all-zero table.
    pub policy_changes: Vec<PolicySnapshot>,
    pub refits: Vec<Refit<f64>>,
    pub q: QTable<f64>,
    pub q_updates: u64,
}

impl RunOutput {
    pub fn final_policy(&self) -> &[ActionId] {
        &self.policy_changes.last().expect("initial snapshot").policy
    }

    /// Greedy action for `state` at the end of `step`.
    pub fn policy_at(&self, step: u64) -> &[ActionId] {
        let i = self.policy_changes.partition_point(|p| p.step <= step);
        &self.policy_changes[i.saturating_sub(1)].policy
    }

    /// Whether the greedy action of `state` stayed put over the last `tail`
    /// steps.
    pub fn stable_over_tail(&self, state: StateId, tail: u64) -> bool {
        let end = self.record.len() as u64;
        let from = end.saturating_sub(tail);
        let target = self.final_policy()[state.0];
        self.policy_changes
            .iter()
            .filter(|p| p.step >= from)
            .all(|p| p.policy[state.0] == target)
            && self.policy_at(from)[state.0] == target
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutput> {
    run_experiment_observed(cfg, &mut ())
}

pub fn run_experiment_observed(cfg: &ExperimentConfig, observer: &mut dyn StepObserver) -> Result<RunOutput> {
    cfg.validate()?;
    let mut world = World::build(cfg)?;
    let (n_states, n_actions) = (world.state_count(), world.action_count());

    let a = &cfg.agent;
    let mut q = QTable::new(n_states, n_actions, a.alpha, a.gamma)?;
    let mut schedule = ExplorationSchedule::new(a.eps_max, a.eps_min, a.decay)?;
    let mut agent_rng = RngStream::for_component(cfg.seed, Stream::Agent);
    let mut mitigation_rng = RngStream::for_component(cfg.seed, Stream::Mitigation);

    let policy = cfg.mitigation;
    let shaping = policy.shapes_reward();
    let mut tracker = if shaping {
        let schedule = LambdaSchedule::new(policy.lambda_percent().unwrap_or(0.0), cfg.privacy.refit_cadence)?;
        Some(MiTracker::new(
            n_states,
            n_actions,
            cfg.privacy.window,
            schedule,
            cfg.steps,
        )?)
    } else {
        None
    };

    let mut rows = Vec::with_capacity(cfg.steps as usize);
    let mut policy_changes = vec![PolicySnapshot {
        step: 0,
        policy: greedy_policy(&q),
    }];

    for t in 0..cfg.steps {
        if let Some(sw) = &cfg.behavior_switch {
            // The activity for step t is drawn while stepping t − 1, so the
            // profile goes in one step early.
            if sw.step > 0 && t + 1 == sw.step {
                if let World::Thermal(w) = &mut world {
                    w.set_profile(profile_for(sw.human, sw.randomness, sw.schedule.as_deref())?);
                }
            }
            if t == sw.step && cfg.privacy.restart_fit_on_switch {
                if let Some(tr) = tracker.as_mut() {
                    tr.restart_fit();
                }
            }
        }

        let s = world.current_state();
        let legal = world.legal_actions();
        let epsilon = schedule.epsilon();
        let chosen = select_action_among(&q, s, &legal, &schedule, &mut agent_rng)?;
        observer.phase(t, Phase::Select);
        let emitted = emit_action_among(&policy, chosen, &legal, &mut mitigation_rng)?;
        observer.phase(t, Phase::Emit);

        let (mi, lambda) = match tracker.as_mut() {
            Some(tr) => {
                observer.phase(t, Phase::Push);
                let mi = tr.record(t, s, emitted)?;
                observer.phase(t, Phase::Mi);
                if tr.refit_due() {
                    tr.refit().map_err(|e| e.context(format!("refit at step {t}")))?;
                    observer.phase(t, Phase::Refit);
                }
                let lambda = tr.lambda();
                observer.phase(t, Phase::Lambda);
                (Some(mi), Some(lambda))
            }
            None => (None, None),
        };

        let out = world.step(emitted).map_err(|e| e.context(format!("step {t}")))?;
        observer.phase(t, Phase::Act);
        let shaped = shape_reward(&policy, out.raw_reward, mi.unwrap_or(0.0), lambda.unwrap_or(0.0))?;
        observer.phase(t, Phase::Shape);
        let next = out.next_state;
        observer.phase(t, Phase::Observe);
        if out.update_ready {
            // The world ran the emitted action, so that is what gets credited.
            q.update(s, emitted, shaped, next)?;
            schedule.record_update();
            observer.phase(t, Phase::Update);
            let greedy = greedy_policy(&q);
            if greedy != policy_changes.last().expect("initial snapshot").policy {
                policy_changes.push(PolicySnapshot {
                    step: t,
                    policy: greedy,
                });
            }
        }

        rows.push(RunRow {
            t,
            state: s,
            chosen_action: chosen,
            emitted_action: emitted,
            raw_reward: out.raw_reward,
            shaped_reward: shaped,
            mi_bits: mi,
            lambda_bits: lambda,
            epsilon,
            observable: out.observable,
        });
    }

    if rows.len() as u64 != cfg.steps {
        return Err(Error::Contract("run produced the wrong number of rows".into()));
    }
    Ok(RunOutput {
        record: RunRecord {
            rows,
            slots_per_day: world.slots_per_day(),
        },
        policy_changes,
        refits: tracker.map(|t| t.refits().to_vec()).unwrap_or_default(),
        q,
        q_updates: schedule.update_count,
    })
}
