//! The eavesdropper pointed at a finished run directory.

use std::io::Write;
use std::path::Path;

use crate::adversary::{attack, clustering_accuracy, Attack};
use crate::error::{Error, Result};
use crate::harness::config::ExperimentConfig;
use crate::harness::export::{ADVERSARY_FILE, CONFIG_FILE, RUN_FILE};
use crate::harness::record::{read_adversary_csv, RunRecord};
use crate::harness::run::feature_space;
use crate::rng::{RngStream, Stream};

#[derive(Debug, Clone, PartialEq)]
pub struct AttackReport {
    pub attack: Attack,
    /// Accuracy of the best model at each k, present when the run directory
    /// also holds ground truth.
    pub accuracy_by_k: Option<Vec<f64>>,
}

/// Attack the emitted actions in `run_dir`. The config (by default the run's
/// own echo) supplies the feature space and clustering options; `seed`
/// overrides the adversary seed.
///
/// Ground truth from `run.csv` is read only after clustering, for scoring.
pub fn attack_run_dir(run_dir: &Path, config: Option<&ExperimentConfig>, seed: Option<u64>) -> Result<AttackReport> {
    let cfg = match config {
        Some(c) => c.clone(),
        None => ExperimentConfig::load(&run_dir.join(CONFIG_FILE))?,
    };
    let input = run_dir.join(ADVERSARY_FILE);
    let file = std::fs::File::open(&input).map_err(|e| Error::io(&input, e))?;
    let trace = read_adversary_csv(std::io::BufReader::new(file)).map_err(|e| e.context(input.display()))?;
    let space = feature_space(&cfg)?;
    let mut rng = RngStream::for_component(seed.unwrap_or(cfg.seed), Stream::Adversary);
    let attack = attack(&trace, &space, &cfg.adversary, &mut rng)?;

    let run_csv = run_dir.join(RUN_FILE);
    let accuracy_by_k = if run_csv.exists() {
        let record = RunRecord::load(&run_csv, space.slots_per_day.unwrap_or(1))?;
        if record.len() != trace.len() {
            return Err(Error::Contract(format!(
                "{} has {} rows but {} has {}",
                run_csv.display(),
                record.len(),
                input.display(),
                trace.len()
            )));
        }
        let states = record.states();
        let scores = attack
            .models
            .iter()
            .map(|m| clustering_accuracy::<f64>(&m.assignments, &states))
            .collect::<Result<Vec<_>>>()?;
        Some(scores)
    } else {
        None
    };
    Ok(AttackReport { attack, accuracy_by_k })
}

impl AttackReport {
    /// Accuracy of the chosen model.
    pub fn accuracy(&self) -> Option<f64> {
        self.accuracy_at(self.attack.model.k)
    }

    pub fn accuracy_at(&self, k: usize) -> Option<f64> {
        self.accuracy_by_k.as_ref()?.get(k.checked_sub(1)?).copied()
    }

    /// `clusters.csv`: each trace sample with its cluster.
    pub fn write_clusters<W: Write>(&self, run_dir: &Path, w: W) -> Result<()> {
        let input = run_dir.join(ADVERSARY_FILE);
        let file = std::fs::File::open(&input).map_err(|e| Error::io(&input, e))?;
        let trace = read_adversary_csv(std::io::BufReader::new(file))?;
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["day", "slot", "emitted_action", "cluster"])?;
        for (s, c) in trace.samples().iter().zip(&self.attack.model.assignments) {
            out.write_record([
                s.day.to_string(),
                s.slot.to_string(),
                s.action.0.to_string(),
                c.to_string(),
            ])?;
        }
        out.flush().map_err(|e| Error::io("clusters.csv", e))?;
        Ok(())
    }

    /// `attack.csv`: the WCSS curve, the elbow and the score.
    pub fn write_summary<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["k", "wcss", "elbow", "chosen", "accuracy"])?;
        for (i, wcss) in self.attack.wcss.iter().enumerate() {
            let k = i + 1;
            out.write_record([
                k.to_string(),
                wcss.to_string(),
                (k == self.attack.elbow_k).to_string(),
                (k == self.attack.model.k).to_string(),
                self.accuracy_at(k).map_or(String::new(), |a| a.to_string()),
            ])?;
        }
        out.flush().map_err(|e| Error::io("attack.csv", e))?;
        Ok(())
    }
}
