//! Aggregate sweep tables into a privacy-utility summary.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Columns identifying a configuration.
pub const GROUP_COLUMNS: [&str; 5] = ["environment", "mitigation", "p", "zeta", "lambda_percent"];

/// Metrics averaged in the report, in output order.
pub const REPORT_METRICS: [&str; 8] = [
    "pmv_std",
    "mean_observable",
    "final_mi_bits",
    "clustering_accuracy",
    "state_accuracy",
    "utility_drop",
    "penalized_steps",
    "lambda_final",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub key: Vec<String>,
    pub runs: usize,
    /// Mean of each metric over the runs where it was present.
    pub means: Vec<Option<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub rows: Vec<ReportRow>,
}

#[derive(Default)]
struct Acc {
    runs: usize,
    sums: Vec<(f64, usize)>,
}

impl Report {
    pub fn from_readers<R: Read>(readers: impl IntoIterator<Item = (String, R)>) -> Result<Self> {
        let mut groups: BTreeMap<Vec<String>, Acc> = BTreeMap::new();
        for (name, r) in readers {
            let mut reader = csv::Reader::from_reader(r);
            let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
            let col = |c: &str| {
                header.iter().position(|h| h == c).ok_or_else(|| Error::Parse {
                    context: name.clone(),
                    message: format!("missing column {c}"),
                })
            };
            let key_idx = GROUP_COLUMNS.iter().map(|c| col(c)).collect::<Result<Vec<_>>>()?;
            let metric_idx: Vec<Option<usize>> = REPORT_METRICS
                .iter()
                .map(|c| header.iter().position(|h| h == c))
                .collect();
            for rec in reader.records() {
                let rec = rec?;
                let key: Vec<String> = key_idx.iter().map(|&i| rec.get(i).unwrap_or("").to_string()).collect();
                let acc = groups.entry(key).or_default();
                acc.runs += 1;
                acc.sums.resize(REPORT_METRICS.len(), (0.0, 0));
                for (j, idx) in metric_idx.iter().enumerate() {
                    let Some(field) = idx.and_then(|i| rec.get(i)).filter(|f| !f.is_empty()) else {
                        continue;
                    };
                    let v: f64 = field.parse().map_err(|e| Error::Parse {
                        context: format!("{name} column {}", REPORT_METRICS[j]),
                        message: format!("'{field}': {e}"),
                    })?;
                    acc.sums[j].0 += v;
                    acc.sums[j].1 += 1;
                }
            }
        }
        Ok(Self {
            rows: groups
                .into_iter()
                .map(|(key, acc)| ReportRow {
                    key,
                    runs: acc.runs,
                    means: acc.sums.iter().map(|&(s, n)| (n > 0).then(|| s / n as f64)).collect(),
                })
                .collect(),
        })
    }

    pub fn from_paths(paths: &[impl AsRef<Path>]) -> Result<Self> {
        let mut files = Vec::new();
        for p in paths {
            let p = p.as_ref();
            let f = std::fs::File::open(p).map_err(|e| Error::io(p, e))?;
            files.push((p.display().to_string(), std::io::BufReader::new(f)));
        }
        Self::from_readers(files)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header: Vec<&str> = GROUP_COLUMNS.to_vec();
        header.push("runs");
        header.extend(REPORT_METRICS);
        out.write_record(&header)?;
        for row in &self.rows {
            let mut rec = row.key.clone();
            rec.push(row.runs.to_string());
            rec.extend(row.means.iter().map(|m| m.map_or(String::new(), |v| v.to_string())));
            out.write_record(&rec)?;
        }
        out.flush().map_err(|e| Error::io("report.csv", e))?;
        Ok(())
    }

    /// Fixed-width text table for the terminal.
    pub fn to_table(&self) -> String {
        let mut header: Vec<String> = GROUP_COLUMNS.iter().map(|s| s.to_string()).collect();
        header.push("runs".into());
        header.extend(REPORT_METRICS.iter().map(|s| s.to_string()));
        let mut lines = vec![header];
        for row in &self.rows {
            let mut cells = row.key.clone();
            cells.push(row.runs.to_string());
            cells.extend(row.means.iter().map(|m| m.map_or("-".into(), |v| format!("{v:.4}"))));
            lines.push(cells);
        }
        let widths: Vec<usize> = (0..lines[0].len())
            .map(|c| lines.iter().map(|l| l[c].len()).max().unwrap_or(0))
            .collect();
        lines
            .iter()
            .map(|l| {
                let cells: Vec<String> = l.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
                cells.join("  ").trim_end().to_string() + "\n"
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_and_averages() {
        let a = "index,seed,environment,mitigation,p,zeta,lambda_percent,pmv_std,final_mi_bits\n\
                 0,1,thermal,randomize,0.5,,,0.4,1.0\n\
                 1,2,thermal,adaparl,,0.6,0.8,0.2,0.5\n";
        let b = "index,seed,environment,mitigation,p,zeta,lambda_percent,pmv_std,final_mi_bits\n\
                 0,9,thermal,randomize,0.5,,,0.6,\n";
        let r = Report::from_readers([("a".to_string(), a.as_bytes()), ("b".to_string(), b.as_bytes())]).unwrap();
        assert_eq!(r.rows.len(), 2);
        let rand = r.rows.iter().find(|row| row.key[1] == "randomize").unwrap();
        assert_eq!(rand.runs, 2);
        assert!((rand.means[0].unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(rand.means[2], Some(1.0));
        assert_eq!(rand.means[3], None);
        assert_eq!(rand.means[4], None);
        assert!(r.to_table().lines().count() == 3);
    }

    #[test]
    fn missing_key_column_is_an_error() {
        let bad = "environment,pmv_std\nthermal,1\n";
        assert!(Report::from_readers([("x".to_string(), bad.as_bytes())]).is_err());
    }
}
