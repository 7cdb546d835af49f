//! Run directories on disk.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::config::ExperimentConfig;
use crate::harness::metrics::MetricsSummary;
use crate::harness::run::RunOutput;

pub const RUN_FILE: &str = "run.csv";
pub const METRICS_FILE: &str = "metrics.csv";
pub const CONFIG_FILE: &str = "config.echo";
pub const ADVERSARY_FILE: &str = "adversary-input.csv";
pub const REFITS_FILE: &str = "refits.csv";

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

/// Write every artifact of one run into `dir`, creating it if needed.
pub fn export_run(dir: &Path, cfg: &ExperimentConfig, output: &RunOutput, metrics: &MetricsSummary) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let with = |name: &str, f: &dyn Fn(&mut BufWriter<File>) -> Result<()>| -> Result<()> {
        let path = dir.join(name);
        let mut w = create(&path)?;
        f(&mut w).map_err(|e| e.context(path.display()))?;
        w.flush().map_err(|e| Error::io(&path, e))
    };
    with(RUN_FILE, &|w| output.record.write_csv(w))?;
    with(ADVERSARY_FILE, &|w| output.record.write_adversary_csv(w))?;
    with(METRICS_FILE, &|w| metrics.write_csv(w))?;
    with(CONFIG_FILE, &|w| {
        w.write_all(cfg.echo().as_bytes())
            .map_err(|e| Error::io(CONFIG_FILE, e))
    })?;
    with(REFITS_FILE, &|w| {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["step", "a", "b", "c", "fmax", "lambda"])?;
        for r in &output.refits {
            out.write_record([
                r.step.to_string(),
                r.fit.a.to_string(),
                r.fit.b.to_string(),
                r.fit.c.to_string(),
                r.fmax.to_string(),
                r.lambda.to_string(),
            ])?;
        }
        out.flush().map_err(|e| Error::io(REFITS_FILE, e))
    })?;
    Ok(())
}
