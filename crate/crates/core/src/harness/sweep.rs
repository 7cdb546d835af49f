//! Grid sweeps over mitigation parameters.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::harness::config::ExperimentConfig;
use crate::harness::metrics::{compute_metrics, MetricsSummary};
use crate::harness::run::run_experiment;
use crate::privacy::MitigationPolicy;
use crate::rng::derive_seed;

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub index: usize,
    pub seed: u64,
    pub mitigation: MitigationPolicy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub point: GridPoint,
    pub metrics: MetricsSummary,
}

/// Expand the grid of `cfg` into run configurations, in row order.
///
/// A `p` grid yields randomisation points. `zeta` and `lambda_percent` grids
/// are crossed (zeta outer) and fill in the missing one from the base
/// mitigation.
pub fn grid_points(cfg: &ExperimentConfig) -> Result<Vec<GridPoint>> {
    let grid = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::config("sweep", "no sweep grid configured"))?;
    if grid.is_empty() {
        return Err(Error::config("sweep", "grid is empty"));
    }
    let mut policies = Vec::new();
    if !grid.p.is_empty() {
        for &p in &grid.p {
            policies.push(MitigationPolicy::new_randomize(p).map_err(|e| Error::config("sweep.p", e.to_string()))?);
        }
    } else {
        let base = cfg.mitigation;
        let zetas = if grid.zeta.is_empty() {
            vec![base.zeta().ok_or_else(|| {
                Error::config(
                    "sweep.lambda_percent",
                    "needs sweep.zeta or a base mitigation with zeta",
                )
            })?]
        } else {
            grid.zeta.clone()
        };
        for &zeta in &zetas {
            if grid.lambda_percent.is_empty() {
                let policy = match base {
                    MitigationPolicy::FixedPrivacy { .. } => MitigationPolicy::new_fixed(zeta),
                    MitigationPolicy::AdaParl { lambda_percent, .. } => {
                        MitigationPolicy::new_adaparl(zeta, lambda_percent)
                    }
                    _ => {
                        return Err(Error::config(
                            "sweep.zeta",
                            "needs sweep.lambda_percent or a base mitigation of kind fixed or adaparl",
                        ))
                    }
                };
                policies.push(policy.map_err(|e| Error::config("sweep.zeta", e.to_string()))?);
            } else {
                for &l in &grid.lambda_percent {
                    policies.push(
                        MitigationPolicy::new_adaparl(zeta, l)
                            .map_err(|e| Error::config("sweep.lambda_percent", e.to_string()))?,
                    );
                }
            }
        }
    }
    Ok(policies
        .into_iter()
        .enumerate()
        .map(|(index, mitigation)| GridPoint {
            index,
            seed: derive_seed(cfg.seed, index as u64),
            mitigation,
        })
        .collect())
}

/// Config for one grid point.
pub fn point_config(cfg: &ExperimentConfig, point: &GridPoint) -> ExperimentConfig {
    let mut c = cfg.clone();
    c.sweep = None;
    c.seed = point.seed;
    c.mitigation = point.mitigation;
    c
}

/// Run one point and its unmitigated twin (same seed) for the utility drop.
pub fn run_point(cfg: &ExperimentConfig, point: &GridPoint) -> Result<SweepRow> {
    let ctx = |e: Error| e.context(format!("grid point {} ({})", point.index, point.mitigation));
    let pc = point_config(cfg, point);
    let out = run_experiment(&pc).map_err(ctx)?;
    let mut metrics = compute_metrics(&out.record, &pc).map_err(ctx)?;
    let mut base_cfg = pc.clone();
    base_cfg.mitigation = MitigationPolicy::None;
    let base = run_experiment(&base_cfg).map_err(ctx)?;
    let base_metrics = compute_metrics(&base.record, &base_cfg).map_err(ctx)?;
    metrics = metrics.with_baseline(&base_metrics).map_err(ctx)?;
    Ok(SweepRow {
        point: point.clone(),
        metrics,
    })
}

/// One independent run per grid point, in parallel; rows come back in grid
/// order.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let points = grid_points(cfg)?;
    points.par_iter().map(|p| run_point(cfg, p)).collect()
}

pub const SWEEP_KEY_COLUMNS: [&str; 7] = [
    "index",
    "seed",
    "environment",
    "mitigation",
    "p",
    "zeta",
    "lambda_percent",
];

pub fn write_sweep_csv<W: Write>(cfg: &ExperimentConfig, rows: &[SweepRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<&str> = SWEEP_KEY_COLUMNS.to_vec();
    header.extend(MetricsSummary::field_names());
    out.write_record(&header)?;
    for row in rows {
        let m = row.point.mitigation;
        let o = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        let mut rec = vec![
            row.point.index.to_string(),
            row.point.seed.to_string(),
            cfg.environment.to_string(),
            m.tag().to_string(),
            o(m.randomize_p()),
            o(m.zeta()),
            o(m.lambda_percent()),
        ];
        rec.extend(row.metrics.fields().into_iter().map(|(_, v)| v));
        out.write_record(&rec)?;
    }
    out.flush().map_err(|e| Error::io("sweep.csv", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::SweepGrid;

    fn with_grid(grid: SweepGrid, base: MitigationPolicy) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::classroom().with_steps(200).with_mitigation(base);
        cfg.sweep = Some(grid);
        cfg
    }

    #[test]
    fn grid_expansion() {
        let cfg = with_grid(
            SweepGrid {
                zeta: vec![0.2, 0.4],
                lambda_percent: vec![0.0, 0.8],
                ..Default::default()
            },
            MitigationPolicy::None,
        );
        let pts = grid_points(&cfg).unwrap();
        assert_eq!(pts.len(), 4);
        assert_eq!(pts[1].mitigation, MitigationPolicy::new_adaparl(0.2, 0.8).unwrap());
        assert_eq!(pts[3].seed, derive_seed(cfg.seed, 3));

        let fixed = with_grid(
            SweepGrid {
                zeta: vec![0.2, 0.4, 0.6],
                ..Default::default()
            },
            MitigationPolicy::new_fixed(0.5).unwrap(),
        );
        assert!(grid_points(&fixed)
            .unwrap()
            .iter()
            .all(|p| matches!(p.mitigation, MitigationPolicy::FixedPrivacy { .. })));

        let bad = with_grid(
            SweepGrid {
                zeta: vec![0.2],
                ..Default::default()
            },
            MitigationPolicy::None,
        );
        assert!(grid_points(&bad).unwrap_err().to_string().contains("sweep.zeta"));
    }

    #[test]
    fn parallel_rows_match_serial_runs() {
        let cfg = with_grid(
            SweepGrid {
                p: vec![0.0, 0.3],
                ..Default::default()
            },
            MitigationPolicy::None,
        );
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 2);
        for row in &rows {
            assert_eq!(run_point(&cfg, &row.point).unwrap(), *row);
        }
        let mut buf = Vec::new();
        write_sweep_csv(&cfg, &rows, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 3);
    }
}
