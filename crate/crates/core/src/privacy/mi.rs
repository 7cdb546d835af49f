//! Plug-in mutual information between state and action histories.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::rl::{ActionId, StateId};
use crate::scalar::Scalar;

/// Lockstep state/action queues with joint and marginal counts.
///
/// With a window `W`, only the most recent `W` pairs are counted; otherwise
/// the queues grow for the whole run.
#[derive(Debug, Clone)]
pub struct HistoryQueues {
    state_count: usize,
    action_count: usize,
    window: Option<usize>,
    states: VecDeque<StateId>,
    actions: VecDeque<ActionId>,
    joint: Vec<u64>,
    state_marginal: Vec<u64>,
    action_marginal: Vec<u64>,
}

impl HistoryQueues {
    pub fn new(state_count: usize, action_count: usize, window: Option<usize>) -> Result<Self> {
        if state_count == 0 || action_count == 0 {
            return Err(Error::domain("history needs non-empty state and action spaces"));
        }
        if window == Some(0) {
            return Err(Error::domain("history window must be positive"));
        }
        Ok(Self {
            state_count,
            action_count,
            window,
            states: VecDeque::new(),
            actions: VecDeque::new(),
            joint: vec![0; state_count * action_count],
            state_marginal: vec![0; state_count],
            action_marginal: vec![0; action_count],
        })
    }

    /// Build from complete sequences (no window).
    pub fn from_sequences(
        state_count: usize,
        action_count: usize,
        states: &[StateId],
        actions: &[ActionId],
    ) -> Result<Self> {
        if states.len() != actions.len() {
            return Err(Error::domain(format!(
                "history lengths differ: {} states vs {} actions",
                states.len(),
                actions.len()
            )));
        }
        let mut h = Self::new(state_count, action_count, None)?;
        for (&s, &a) in states.iter().zip(actions) {
            h.push(s, a)?;
        }
        Ok(h)
    }

    pub fn push(&mut self, s: StateId, a: ActionId) -> Result<()> {
        if s.0 >= self.state_count {
            return Err(Error::IndexOutOfRange {
                what: "state",
                index: s.0,
                size: self.state_count,
            });
        }
        if a.0 >= self.action_count {
            return Err(Error::IndexOutOfRange {
                what: "action",
                index: a.0,
                size: self.action_count,
            });
        }
        self.states.push_back(s);
        self.actions.push_back(a);
        self.count(s, a, true);
        if let Some(w) = self.window {
            while self.states.len() > w {
                let old_s = self.states.pop_front().expect("non-empty");
                let old_a = self.actions.pop_front().expect("lockstep");
                self.count(old_s, old_a, false);
            }
        }
        Ok(())
    }

    fn count(&mut self, s: StateId, a: ActionId, add: bool) {
        let cells = [
            &mut self.joint[s.0 * self.action_count + a.0],
            &mut self.state_marginal[s.0],
            &mut self.action_marginal[a.0],
        ];
        for c in cells {
            if add {
                *c += 1;
            } else {
                *c -= 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.states.iter().copied()
    }

    pub fn actions(&self) -> impl Iterator<Item = ActionId> + '_ {
        self.actions.iter().copied()
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn action_count(&self) -> usize {
        self.action_count
    }

    pub fn window(&self) -> Option<usize> {
        self.window
    }

    /// Upper bound `min(log2 |S|, log2 |A|)` in bits.
    pub fn mi_cap<T: Scalar>(&self) -> T {
        mi_cap(self.state_count, self.action_count)
    }
}

pub fn mi_cap<T: Scalar>(state_count: usize, action_count: usize) -> T {
    T::from_usize_lossy(state_count.min(action_count)).log2()
}

/// Plug-in estimate in bits:
/// `Σ p̂(s,a)·log2(p̂(s,a) / (p̂(s)·p̂(a)))`, zero cells skipped, clamped at 0.
pub fn mutual_information<T: Scalar>(h: &HistoryQueues) -> Result<T> {
    if h.is_empty() {
        return Err(Error::domain("mutual information of an empty history"));
    }
    let n = T::from_usize_lossy(h.len());
    let mut total = T::zero();
    for s in 0..h.state_count {
        let ns = h.state_marginal[s];
        if ns == 0 {
            continue;
        }
        for a in 0..h.action_count {
            let nsa = h.joint[s * h.action_count + a];
            if nsa == 0 {
                continue;
            }
            let na = h.action_marginal[a];
            let nsa_t = T::from_u64(nsa).expect("count");
            let ratio = nsa_t * n / (T::from_u64(ns).expect("count") * T::from_u64(na).expect("count"));
            total += nsa_t / n * ratio.log2();
        }
    }
    Ok(total.max(T::zero()))
}

/// Convenience for complete sequences.
pub fn mutual_information_of<T: Scalar>(
    state_count: usize,
    action_count: usize,
    states: &[StateId],
    actions: &[ActionId],
) -> Result<T> {
    mutual_information(&HistoryQueues::from_sequences(
        state_count,
        action_count,
        states,
        actions,
    )?)
}
