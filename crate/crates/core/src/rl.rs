//! Tabular Q-learning with ε-greedy exploration.

use std::fmt;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::scalar::Scalar;

/// Dense index of an environment state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct StateId(pub usize);

/// Dense index of an action. The environment owns its physical meaning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ActionId(pub usize);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ActionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// State × action value matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable<T> {
    states: usize,
    actions: usize,
    values: Vec<T>,
    alpha: T,
    gamma: T,
}

impl<T: Scalar> QTable<T> {
    /// Zero-initialised table.
    pub fn new(states: usize, actions: usize, alpha: T, gamma: T) -> Result<Self> {
        if states == 0 || actions == 0 {
            return Err(Error::domain("q-table needs at least one state and one action"));
        }
        let unit = T::zero()..=T::one();
        if !unit.contains(&alpha) || !unit.contains(&gamma) {
            return Err(Error::domain(format!(
                "alpha and gamma must lie in [0, 1], got alpha={alpha}, gamma={gamma}"
            )));
        }
        Ok(Self {
            states,
            actions,
            values: vec![T::zero(); states * actions],
            alpha,
            gamma,
        })
    }

    pub fn from_rows(rows: &[Vec<T>], alpha: T, gamma: T) -> Result<Self> {
        let actions = rows.first().map_or(0, Vec::len);
        let mut table = Self::new(rows.len(), actions, alpha, gamma)?;
        for (s, row) in rows.iter().enumerate() {
            if row.len() != actions {
                return Err(Error::domain("ragged q-table rows"));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::domain("q-values must be finite"));
            }
            table.values[s * actions..(s + 1) * actions].copy_from_slice(row);
        }
        Ok(table)
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn action_count(&self) -> usize {
        self.actions
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    fn check_state(&self, s: StateId) -> Result<()> {
        if s.0 >= self.states {
            return Err(Error::IndexOutOfRange {
                what: "state",
                index: s.0,
                size: self.states,
            });
        }
        Ok(())
    }

    fn check_action(&self, a: ActionId) -> Result<()> {
        if a.0 >= self.actions {
            return Err(Error::IndexOutOfRange {
                what: "action",
                index: a.0,
                size: self.actions,
            });
        }
        Ok(())
    }

    pub fn get(&self, s: StateId, a: ActionId) -> Result<T> {
        self.check_state(s)?;
        self.check_action(a)?;
        Ok(self.values[s.0 * self.actions + a.0])
    }

    pub fn row(&self, s: StateId) -> Result<&[T]> {
        self.check_state(s)?;
        Ok(&self.values[s.0 * self.actions..(s.0 + 1) * self.actions])
    }

    /// One-step Q-learning backup:
    /// `Q(s,a) += α·(r + γ·max_a' Q(s',a') − Q(s,a))`.
    pub fn update(&mut self, s: StateId, a: ActionId, reward: T, next: StateId) -> Result<()> {
        self.check_state(s)?;
        self.check_action(a)?;
        self.check_state(next)?;
        if !reward.is_finite() {
            return Err(Error::domain(format!("non-finite reward {reward}")));
        }
        let best_next = max_value(self.row(next)?);
        let idx = s.0 * self.actions + a.0;
        let current = self.values[idx];
        let updated = current + self.alpha * (reward + self.gamma * best_next - current);
        if !updated.is_finite() {
            return Err(Error::domain("q-update produced a non-finite value"));
        }
        self.values[idx] = updated;
        Ok(())
    }

    /// Greedy action for `s`, lowest index on ties.
    pub fn greedy(&self, s: StateId) -> Result<ActionId> {
        Ok(ActionId(argmax(self.row(s)?)))
    }

    /// Greedy action among `legal` (ascending ids), lowest index on ties.
    pub fn greedy_among(&self, s: StateId, legal: &[ActionId]) -> Result<ActionId> {
        let row = self.row(s)?;
        let mut best: Option<(ActionId, T)> = None;
        for &a in legal {
            self.check_action(a)?;
            let v = row[a.0];
            match best {
                Some((b, bv)) if v < bv || (v == bv && a.0 > b.0) => {}
                _ => best = Some((a, v)),
            }
        }
        best.map(|(a, _)| a)
            .ok_or_else(|| Error::domain("empty legal action set"))
    }
}

fn max_value<T: Scalar>(row: &[T]) -> T {
    row.iter().copied().fold(T::neg_infinity(), T::max)
}

fn argmax<T: Scalar>(row: &[T]) -> usize {
    let mut best = 0;
    for (i, &v) in row.iter().enumerate().skip(1) {
        if v > row[best] {
            best = i;
        }
    }
    best
}

/// Exponentially decaying exploration rate, floored at `eps_min`.
///
/// `ε(k) = max(eps_min, eps_max · exp(−decay · k))` where `k` counts Q-updates.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplorationSchedule<T> {
    pub eps_max: T,
    pub eps_min: T,
    pub decay: T,
    pub update_count: u64,
    /// Pins ε to a fixed value; used by tests and evaluation rollouts.
    pub forced: Option<T>,
}

impl<T: Scalar> Default for ExplorationSchedule<T> {
    fn default() -> Self {
        Self {
            eps_max: T::lit(0.9),
            eps_min: T::lit(0.1),
            decay: T::lit(0.01),
            update_count: 0,
            forced: None,
        }
    }
}

impl<T: Scalar> ExplorationSchedule<T> {
    pub fn new(eps_max: T, eps_min: T, decay: T) -> Result<Self> {
        if !(T::zero() <= eps_min && eps_min <= eps_max && eps_max <= T::one()) {
            return Err(Error::domain(format!(
                "need 0 <= eps_min <= eps_max <= 1, got {eps_min}..{eps_max}"
            )));
        }
        if decay < T::zero() || !decay.is_finite() {
            return Err(Error::domain("decay must be finite and non-negative"));
        }
        Ok(Self {
            eps_max,
            eps_min,
            decay,
            update_count: 0,
            forced: None,
        })
    }

    pub fn forced(eps: T) -> Self {
        Self {
            forced: Some(eps),
            ..Self::default()
        }
    }

    pub fn epsilon(&self) -> T {
        if let Some(eps) = self.forced {
            return eps;
        }
        let k = T::from_u64(self.update_count).unwrap_or_else(T::infinity);
        let decayed = self.eps_max * (-self.decay * k).exp();
        decayed.max(self.eps_min)
    }

    pub fn record_update(&mut self) {
        self.update_count += 1;
    }
}

/// ε-greedy choice over all actions.
///
/// Always draws one uniform for the coin; the random branch draws one more.
pub fn select_action<T: Scalar>(
    table: &QTable<T>,
    s: StateId,
    schedule: &ExplorationSchedule<T>,
    rng: &mut RngStream,
) -> Result<ActionId> {
    table.check_state(s)?;
    let eps = schedule.epsilon().to_f64_lossy();
    if rng.bernoulli(eps) {
        Ok(ActionId(rng.below(table.action_count())))
    } else {
        table.greedy(s)
    }
}

/// ε-greedy choice restricted to `legal` actions.
pub fn select_action_among<T: Scalar>(
    table: &QTable<T>,
    s: StateId,
    legal: &[ActionId],
    schedule: &ExplorationSchedule<T>,
    rng: &mut RngStream,
) -> Result<ActionId> {
    if legal.is_empty() {
        return Err(Error::domain("empty legal action set"));
    }
    if legal.len() == table.action_count() {
        return select_action(table, s, schedule, rng);
    }
    table.check_state(s)?;
    let eps = schedule.epsilon().to_f64_lossy();
    if rng.bernoulli(eps) {
        Ok(legal[rng.below(legal.len())])
    } else {
        table.greedy_among(s, legal)
    }
}

/// Per-state argmax with lowest-index tie-breaking.
pub fn greedy_policy<T: Scalar>(table: &QTable<T>) -> Vec<ActionId> {
    (0..table.state_count())
        .map(|s| ActionId(argmax(&table.values[s * table.actions..(s + 1) * table.actions])))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn update_from_zero_table() {
        let mut q = QTable::new(4, 21, 0.01, 0.001).unwrap();
        q.update(StateId(2), ActionId(5), 3.28, StateId(1)).unwrap();
        assert_abs_diff_eq!(q.get(StateId(2), ActionId(5)).unwrap(), 0.0328, epsilon = 1e-15);
        assert_eq!(q.get(StateId(2), ActionId(4)).unwrap(), 0.0);
    }

    #[test]
    fn full_overwrite_with_unit_alpha() {
        let mut q = QTable::from_rows(&[vec![1.0, 0.0]], 1.0, 0.0).unwrap();
        q.update(StateId(0), ActionId(0), 0.0, StateId(0)).unwrap();
        assert_eq!(q.get(StateId(0), ActionId(0)).unwrap(), 0.0);
    }

    #[test]
    fn hand_evaluated_backup() {
        // row {2, 5}: 2 + 0.5·(1 + 0.5·5 − 2) = 2.75
        let mut q = QTable::from_rows(&[vec![2.0, 5.0]], 0.5, 0.5).unwrap();
        q.update(StateId(0), ActionId(0), 1.0, StateId(0)).unwrap();
        assert_eq!(q.get(StateId(0), ActionId(0)).unwrap(), 2.75);
    }

    #[test]
    fn update_rejects_bad_input() {
        let mut q = QTable::new(2, 2, 0.1f64, 0.9).unwrap();
        assert!(matches!(
            q.update(StateId(2), ActionId(0), 1.0, StateId(0)),
            Err(Error::IndexOutOfRange { what: "state", .. })
        ));
        assert!(matches!(
            q.update(StateId(0), ActionId(9), 1.0, StateId(0)),
            Err(Error::IndexOutOfRange { what: "action", .. })
        ));
        assert!(matches!(
            q.update(StateId(0), ActionId(0), f64::NAN, StateId(0)),
            Err(Error::Domain(_))
        ));
        assert!(QTable::new(2, 2, 1.5f64, 0.0).is_err());
    }

    #[test]
    fn epsilon_schedule_values() {
        let mut sched = ExplorationSchedule::<f64>::default();
        assert_eq!(sched.epsilon(), 0.9);
        sched.update_count = 100;
        assert_abs_diff_eq!(sched.epsilon(), 0.9 * (-1.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(sched.epsilon(), 0.3311, epsilon = 1e-4);
        sched.update_count = 1_000_000;
        assert_eq!(sched.epsilon(), 0.1);
    }

    #[test]
    fn exploit_picks_argmax() {
        let q = QTable::from_rows(&[vec![1.0, 9.0, 3.0]], 0.1, 0.1).unwrap();
        let mut rng = RngStream::new(0);
        let sched = ExplorationSchedule::forced(0.0);
        for _ in 0..10 {
            assert_eq!(select_action(&q, StateId(0), &sched, &mut rng).unwrap(), ActionId(1));
        }
    }

    #[test]
    fn ties_break_to_lowest_index() {
        let q = QTable::<f64>::new(1, 5, 0.1, 0.1).unwrap();
        let mut rng = RngStream::new(0);
        let sched = ExplorationSchedule::forced(0.0);
        assert_eq!(select_action(&q, StateId(0), &sched, &mut rng).unwrap(), ActionId(0));
        let legal = [ActionId(2), ActionId(4)];
        assert_eq!(q.greedy_among(StateId(0), &legal).unwrap(), ActionId(2));
    }

    #[test]
    fn full_exploration_is_uniform() {
        // 10^5 draws over 3 actions; each count within 3σ of n/3.
        let q = QTable::from_rows(&[vec![1.0, 9.0, 3.0]], 0.1, 0.1).unwrap();
        let mut rng = RngStream::new(11);
        let sched = ExplorationSchedule::forced(1.0);
        let n = 100_000usize;
        let mut counts = [0usize; 3];
        for _ in 0..n {
            counts[select_action(&q, StateId(0), &sched, &mut rng).unwrap().0] += 1;
        }
        let p = 1.0 / 3.0;
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!((c as f64 - n as f64 * p).abs() <= 3.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn greedy_policy_small_cases() {
        let q = QTable::<f64>::new(1, 1, 0.1, 0.1).unwrap();
        assert_eq!(greedy_policy(&q), vec![ActionId(0)]);
        let rows: Vec<Vec<f64>> = (0..4)
            .map(|s| (0..4).map(|a| if a == s { 1.0 } else { 0.0 }).collect())
            .collect();
        let q = QTable::from_rows(&rows, 0.1, 0.1).unwrap();
        assert_eq!(greedy_policy(&q), (0..4).map(ActionId).collect::<Vec<_>>());
    }

    #[test]
    fn generic_over_f32() {
        let mut q = QTable::<f32>::new(2, 3, 0.5, 0.5).unwrap();
        q.update(StateId(0), ActionId(2), 4.0, StateId(1)).unwrap();
        assert_eq!(q.greedy(StateId(0)).unwrap(), ActionId(2));
        let sched = ExplorationSchedule::<f32>::default();
        assert!((sched.epsilon() - 0.9).abs() < 1e-6);
    }

    fn brute_force_argmax(row: &[f64]) -> usize {
        let mut best = f64::NEG_INFINITY;
        let mut idx = 0;
        for (i, &v) in row.iter().enumerate() {
            if v > best {
                best = v;
                idx = i;
            }
        }
        idx
    }

    proptest! {
        #[test]
        fn greedy_matches_row_scan(rows in prop::collection::vec(
            prop::collection::vec(-5i32..5, 1..8usize), 1..6usize)) {
            let width = rows[0].len();
            let rows: Vec<Vec<f64>> = rows
                .into_iter()
                .map(|r| (0..width).map(|i| f64::from(*r.get(i).unwrap_or(&0))).collect())
                .collect();
            let q = QTable::from_rows(&rows, 0.1, 0.1).unwrap();
            let policy = greedy_policy(&q);
            let mut rng = RngStream::new(0);
            let sched = ExplorationSchedule::forced(0.0);
            for (s, row) in rows.iter().enumerate() {
                prop_assert_eq!(policy[s].0, brute_force_argmax(row));
                prop_assert_eq!(select_action(&q, StateId(s), &sched, &mut rng).unwrap(), policy[s]);
            }
        }

        #[test]
        fn repeated_update_contracts_geometrically(
            q0 in -50.0f64..50.0, r in -10.0f64..10.0, alpha in 0.01f64..1.0,
            gamma in 0.0f64..1.0, next_row in prop::collection::vec(-5.0f64..5.0, 2)) {
            // s_next's row is never written, so the target r + γ·max stays fixed.
            let mut q = QTable::from_rows(&[vec![q0, 0.0], next_row.clone()], alpha, gamma).unwrap();
            let target = r + gamma * next_row[0].max(next_row[1]);
            let mut gap = (q0 - target).abs();
            for _ in 0..20 {
                q.update(StateId(0), ActionId(0), r, StateId(1)).unwrap();
                let next_gap = (q.get(StateId(0), ActionId(0)).unwrap() - target).abs();
                prop_assert!(next_gap <= (1.0 - alpha) * gap + 1e-9);
                gap = next_gap;
            }
        }

        #[test]
        fn epsilon_monotone_and_bounded(k in 0u64..100_000) {
            let mut s = ExplorationSchedule::<f64> { update_count: k, ..Default::default() };
            let e0 = s.epsilon();
            s.update_count = k + 1;
            let e1 = s.epsilon();
            prop_assert!(e1 <= e0);
            prop_assert!((0.1..=0.9).contains(&e0));
        }
    }
}
