//! Interface between the harness and a simulated human-in-the-loop environment.

use crate::error::Result;
use crate::rl::{ActionId, StateId};

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub raw_reward: f64,
    pub next_state: StateId,
    /// Application observable (PMV, quiz %); `None` when undefined, e.g. an
    /// empty house.
    pub observable: Option<f64>,
    /// Whether the learner may apply its Q-update for this step.
    pub update_ready: bool,
}

pub trait Environment {
    fn state_count(&self) -> usize;

    fn action_count(&self) -> usize;

    fn current_state(&self) -> StateId;

    /// Actions that may be applied in the current configuration, ascending.
    fn legal_actions(&self) -> Vec<ActionId> {
        (0..self.action_count()).map(ActionId).collect()
    }

    /// Apply `action` for one decision period.
    fn step(&mut self, action: ActionId) -> Result<StepOutcome>;

    /// Wall-clock slot of the current step within its day (or session).
    fn slot(&self) -> usize;

    fn slots_per_day(&self) -> usize;

    /// Physical value of an action, as seen by the cloud (e.g. °F set-point).
    fn action_value(&self, action: ActionId) -> f64;

    /// Range of [`Environment::action_value`] over all actions.
    fn action_value_range(&self) -> (f64, f64) {
        let n = self.action_count();
        (
            self.action_value(ActionId(0)),
            self.action_value(ActionId(n.saturating_sub(1))),
        )
    }
}
