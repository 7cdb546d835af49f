//! Summary metrics. Everything here is computed from a [`RunRecord`] and the
//! config that produced it, so it can be recomputed from `run.csv` alone.

use std::collections::BTreeMap;
use std::io::Write;

use crate::adversary::{attack, clustering_accuracy};
use crate::classroom::utility_drop;
use crate::env::Environment;
use crate::error::{Error, Result};
use crate::harness::config::{EnvironmentKind, ExperimentConfig};
use crate::harness::record::RunRecord;
use crate::harness::run::{feature_space, World};
use crate::privacy::{mi_cap, mutual_information_of};
use crate::rng::{RngStream, Stream};

/// Visits per state in each window of the convergence estimate.
pub const CONVERGENCE_WINDOW: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsSummary {
    pub steps: usize,
    /// Steps with a defined observable.
    pub observed_steps: usize,
    /// Population standard deviation of PMV over occupied steps.
    pub pmv_std: Option<f64>,
    /// Mean observable: PMV for the house, quiz % for the classroom.
    pub mean_observable: Option<f64>,
    pub mean_raw_reward: f64,
    pub mean_shaped_reward: f64,
    /// Plug-in MI between the state and emitted-action columns.
    pub final_mi_bits: f64,
    pub mi_cap_bits: f64,
    pub penalized_steps: usize,
    pub lambda_final: Option<f64>,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub lambda_mean: Option<f64>,
    pub convergence_step: Option<u64>,
    pub elbow_k: usize,
    pub attack_k: usize,
    pub clustering_accuracy: f64,
    /// Accuracy of the attacker's model with one cluster per state; `None`
    /// when `k_max` is below the state count.
    pub state_accuracy: Option<f64>,
    /// Percent quiz loss against an unmitigated run; set by paired runs.
    pub utility_drop: Option<f64>,
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (n, sum) = xs.fold((0usize, 0.0), |(n, s), x| (n + 1, s + x));
    (n > 0).then(|| sum / n as f64)
}

/// Population standard deviation; `None` for an empty sample.
pub fn std_dev(xs: &[f64]) -> Option<f64> {
    let m = mean(xs.iter().copied())?;
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64;
    Some(var.sqrt())
}

/// Step after which the modal chosen action of every visited state stays
/// fixed, estimated over windows of [`CONVERGENCE_WINDOW`] visits.
///
/// States with fewer visits than one window are ignored; `None` when no state
/// has a full window.
pub fn convergence_step(record: &RunRecord, state_count: usize, action_count: usize) -> Option<u64> {
    let mut visits: Vec<Vec<(u64, usize)>> = vec![Vec::new(); state_count];
    for r in &record.rows {
        if let Some(v) = visits.get_mut(r.state.0) {
            v.push((r.t, r.chosen_action.0));
        }
    }
    let mut latest = None;
    for v in &visits {
        let windows: Vec<(u64, usize)> = v
            .chunks_exact(CONVERGENCE_WINDOW)
            .map(|w| {
                let mut counts = vec![0usize; action_count];
                for &(_, a) in w {
                    if a < action_count {
                        counts[a] += 1;
                    }
                }
                let mode = (0..action_count).fold(0, |best, a| if counts[a] > counts[best] { a } else { best });
                (w[0].0, mode)
            })
            .collect();
        let Some(&(_, last)) = windows.last() else {
            continue;
        };
        let start = windows.iter().rposition(|&(_, m)| m != last).map_or(0, |i| i + 1);
        let step = windows[start].0;
        latest = Some(latest.map_or(step, |l: u64| l.max(step)));
    }
    latest
}

pub fn dimensions(cfg: &ExperimentConfig) -> Result<(usize, usize)> {
    let world = World::build(cfg)?;
    Ok((world.state_count(), world.action_count()))
}

pub fn compute_metrics(record: &RunRecord, cfg: &ExperimentConfig) -> Result<MetricsSummary> {
    if record.is_empty() {
        return Err(Error::domain("cannot summarise an empty run"));
    }
    let (n_states, n_actions) = dimensions(cfg)?;
    let rows = &record.rows;
    let observed: Vec<f64> = rows.iter().filter_map(|r| r.observable).collect();
    let pmv_std = match cfg.environment {
        EnvironmentKind::Thermal => std_dev(&observed),
        EnvironmentKind::Classroom => None,
    };
    let lambdas: Vec<f64> = rows.iter().filter_map(|r| r.lambda_bits).collect();

    let states = record.states();
    let emitted = record.emitted();
    let final_mi_bits = mutual_information_of::<f64>(n_states, n_actions, &states, &emitted)?;

    let space = feature_space(cfg)?;
    let mut rng = RngStream::for_component(cfg.seed, Stream::Adversary);
    let outcome = attack(&record.action_trace()?, &space, &cfg.adversary, &mut rng)?;
    let accuracy = clustering_accuracy::<f64>(&outcome.model.assignments, &states)?;
    let state_accuracy = match outcome.model_for(n_states) {
        Some(m) => Some(clustering_accuracy::<f64>(&m.assignments, &states)?),
        None => None,
    };

    Ok(MetricsSummary {
        steps: rows.len(),
        observed_steps: observed.len(),
        pmv_std,
        mean_observable: mean(observed.iter().copied()),
        mean_raw_reward: mean(rows.iter().map(|r| r.raw_reward)).unwrap_or(0.0),
        mean_shaped_reward: mean(rows.iter().map(|r| r.shaped_reward)).unwrap_or(0.0),
        final_mi_bits,
        mi_cap_bits: mi_cap(n_states, n_actions),
        penalized_steps: rows.iter().filter(|r| r.is_penalized()).count(),
        lambda_final: lambdas.last().copied(),
        lambda_min: lambdas.iter().copied().reduce(f64::min),
        lambda_max: lambdas.iter().copied().reduce(f64::max),
        lambda_mean: mean(lambdas.iter().copied()),
        convergence_step: convergence_step(record, n_states, n_actions),
        elbow_k: outcome.elbow_k,
        attack_k: outcome.model.k,
        clustering_accuracy: accuracy,
        state_accuracy,
        utility_drop: None,
    })
}

impl MetricsSummary {
    /// Fill `utility_drop` from an unmitigated run's summary.
    pub fn with_baseline(mut self, baseline: &MetricsSummary) -> Result<Self> {
        if let (Some(b), Some(m)) = (baseline.mean_observable, self.mean_observable) {
            if (0.0..=100.0).contains(&m) && b > 0.0 && b <= 100.0 {
                self.utility_drop = Some(utility_drop(b, m)?);
            }
        }
        Ok(self)
    }

    /// Named fields in a stable order; empty strings for absent values.
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        fn o<T: ToString>(v: Option<T>) -> String {
            v.map_or(String::new(), |x| x.to_string())
        }
        vec![
            ("steps", self.steps.to_string()),
            ("observed_steps", self.observed_steps.to_string()),
            ("pmv_std", o(self.pmv_std)),
            ("mean_observable", o(self.mean_observable)),
            ("mean_raw_reward", self.mean_raw_reward.to_string()),
            ("mean_shaped_reward", self.mean_shaped_reward.to_string()),
            ("final_mi_bits", self.final_mi_bits.to_string()),
            ("mi_cap_bits", self.mi_cap_bits.to_string()),
            ("penalized_steps", self.penalized_steps.to_string()),
            ("lambda_final", o(self.lambda_final)),
            ("lambda_min", o(self.lambda_min)),
            ("lambda_max", o(self.lambda_max)),
            ("lambda_mean", o(self.lambda_mean)),
            ("convergence_step", o(self.convergence_step)),
            ("elbow_k", self.elbow_k.to_string()),
            ("attack_k", self.attack_k.to_string()),
            ("clustering_accuracy", self.clustering_accuracy.to_string()),
            ("state_accuracy", o(self.state_accuracy)),
            ("utility_drop", o(self.utility_drop)),
        ]
    }

    pub fn field_names() -> Vec<&'static str> {
        Self::placeholder().fields().into_iter().map(|(k, _)| k).collect()
    }

    fn placeholder() -> Self {
        Self {
            steps: 0,
            observed_steps: 0,
            pmv_std: None,
            mean_observable: None,
            mean_raw_reward: 0.0,
            mean_shaped_reward: 0.0,
            final_mi_bits: 0.0,
            mi_cap_bits: 0.0,
            penalized_steps: 0,
            lambda_final: None,
            lambda_min: None,
            lambda_max: None,
            lambda_mean: None,
            convergence_step: None,
            elbow_k: 0,
            attack_k: 0,
            clustering_accuracy: 0.0,
            state_accuracy: None,
            utility_drop: None,
        }
    }

    /// Rebuild from [`MetricsSummary::fields`] output.
    pub fn from_fields(map: &BTreeMap<String, String>) -> Result<Self> {
        fn get<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>>
        where
            T::Err: std::fmt::Display,
        {
            match map.get(key).map(String::as_str) {
                None => Err(Error::Parse {
                    context: "metrics".into(),
                    message: format!("missing column {key}"),
                }),
                Some("") => Ok(None),
                Some(v) => v.parse().map(Some).map_err(|e| Error::Parse {
                    context: format!("metrics column {key}"),
                    message: format!("'{v}': {e}"),
                }),
            }
        }
        fn req<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<T>
        where
            T::Err: std::fmt::Display,
        {
            get(map, key)?.ok_or_else(|| Error::Parse {
                context: "metrics".into(),
                message: format!("empty column {key}"),
            })
        }
        Ok(Self {
            steps: req(map, "steps")?,
            observed_steps: req(map, "observed_steps")?,
            pmv_std: get(map, "pmv_std")?,
            mean_observable: get(map, "mean_observable")?,
            mean_raw_reward: req(map, "mean_raw_reward")?,
            mean_shaped_reward: req(map, "mean_shaped_reward")?,
            final_mi_bits: req(map, "final_mi_bits")?,
            mi_cap_bits: req(map, "mi_cap_bits")?,
            penalized_steps: req(map, "penalized_steps")?,
            lambda_final: get(map, "lambda_final")?,
            lambda_min: get(map, "lambda_min")?,
            lambda_max: get(map, "lambda_max")?,
            lambda_mean: get(map, "lambda_mean")?,
            convergence_step: get(map, "convergence_step")?,
            elbow_k: req(map, "elbow_k")?,
            attack_k: req(map, "attack_k")?,
            clustering_accuracy: req(map, "clustering_accuracy")?,
            state_accuracy: get(map, "state_accuracy")?,
            utility_drop: get(map, "utility_drop")?,
        })
    }

    /// Header plus one row.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let fields = self.fields();
        out.write_record(fields.iter().map(|(k, _)| *k))?;
        out.write_record(fields.iter().map(|(_, v)| v.as_str()))?;
        out.flush().map_err(|e| Error::io("metrics.csv", e))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::record::RunRow;
    use crate::rl::{ActionId, StateId};

    fn rows(pairs: &[(usize, usize)]) -> RunRecord {
        RunRecord {
            rows: pairs
                .iter()
                .enumerate()
                .map(|(t, &(s, a))| RunRow {
                    t: t as u64,
                    state: StateId(s),
                    chosen_action: ActionId(a),
                    emitted_action: ActionId(a),
                    raw_reward: 0.0,
                    shaped_reward: 0.0,
                    mi_bits: None,
                    lambda_bits: None,
                    epsilon: 0.1,
                    observable: None,
                })
                .collect(),
            slots_per_day: 240,
        }
    }

    #[test]
    fn std_dev_matches_hand_value() {
        assert_eq!(std_dev(&[]), None);
        assert!((std_dev(&[1.0, 3.0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn convergence_finds_last_mode_change() {
        // State 1 settles at once; state 0 switches from 2 to 5 at t = 60.
        let mut pairs = vec![(1, 3); 20];
        pairs.extend(vec![(0, 2); 40]);
        pairs.extend(vec![(0, 5); 40]);
        let rec = rows(&pairs);
        assert_eq!(convergence_step(&rec, 2, 6), Some(60));
        assert_eq!(convergence_step(&rows(&[(0, 1); 19]), 1, 2), None);
        assert_eq!(convergence_step(&rows(&[(0, 1); 60]), 1, 2), Some(0));
    }

    #[test]
    fn fields_round_trip() {
        let cfg = ExperimentConfig::thermal().with_steps(200).with_seed(3);
        let out = crate::harness::run::run_experiment(&cfg).unwrap();
        let m = compute_metrics(&out.record, &cfg).unwrap();
        let map = m.fields().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        assert_eq!(MetricsSummary::from_fields(&map).unwrap(), m);
        assert!(m.pmv_std.unwrap() >= 0.0);
        assert!((0.0..=1.0).contains(&m.clustering_accuracy));
    }
}
