//! Per-step run log and its CSV forms.

use std::io::{Read, Write};
use std::path::Path;

use crate::adversary::{ActionTrace, TraceSample};
use crate::error::{Error, Result};
use crate::rl::{ActionId, StateId};

pub const RUN_HEADER: &str =
    "t,state,chosen_action,emitted_action,raw_reward,shaped_reward,mi_bits,lambda_bits,epsilon,observable";

pub const ADVERSARY_HEADER: &str = "day,slot,emitted_action";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunRow {
    pub t: u64,
    pub state: StateId,
    pub chosen_action: ActionId,
    pub emitted_action: ActionId,
    pub raw_reward: f64,
    pub shaped_reward: f64,
    /// Present only for strategies that track MI.
    pub mi_bits: Option<f64>,
    pub lambda_bits: Option<f64>,
    pub epsilon: f64,
    pub observable: Option<f64>,
}

impl RunRow {
    pub fn is_penalized(&self) -> bool {
        matches!((self.mi_bits, self.lambda_bits), (Some(i), Some(l)) if i >= l)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunRecord {
    pub rows: Vec<RunRow>,
    /// Day length used for the adversary's clock.
    pub slots_per_day: usize,
}

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

fn parse_field<T: std::str::FromStr>(field: &str, column: &str, line: u64) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    field.parse().map_err(|e| Error::Parse {
        context: format!("run.csv line {line}, column {column}"),
        message: format!("'{field}': {e}"),
    })
}

fn parse_opt(field: &str, column: &str, line: u64) -> Result<Option<f64>> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_field(field, column, line).map(Some)
    }
}

impl RunRecord {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn states(&self) -> Vec<StateId> {
        self.rows.iter().map(|r| r.state).collect()
    }

    pub fn emitted(&self) -> Vec<ActionId> {
        self.rows.iter().map(|r| r.emitted_action).collect()
    }

    /// What the eavesdropper gets to see.
    pub fn action_trace(&self) -> Result<ActionTrace> {
        ActionTrace::from_steps(&self.emitted(), self.slots_per_day)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(RUN_HEADER.split(','))?;
        for r in &self.rows {
            out.write_record([
                r.t.to_string(),
                r.state.0.to_string(),
                r.chosen_action.0.to_string(),
                r.emitted_action.0.to_string(),
                r.raw_reward.to_string(),
                r.shaped_reward.to_string(),
                opt(r.mi_bits),
                opt(r.lambda_bits),
                r.epsilon.to_string(),
                opt(r.observable),
            ])?;
        }
        out.flush().map_err(|e| Error::io("run.csv", e))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R, slots_per_day: usize) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(r);
        let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
        if header.join(",") != RUN_HEADER {
            return Err(Error::Parse {
                context: "run.csv header".into(),
                message: format!("expected '{RUN_HEADER}', got '{}'", header.join(",")),
            });
        }
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec?;
            let line = rec.position().map_or(0, |p| p.line());
            let f = |i: usize| rec.get(i).unwrap_or("");
            let cols: Vec<&str> = RUN_HEADER.split(',').collect();
            rows.push(RunRow {
                t: parse_field(f(0), cols[0], line)?,
                state: StateId(parse_field(f(1), cols[1], line)?),
                chosen_action: ActionId(parse_field(f(2), cols[2], line)?),
                emitted_action: ActionId(parse_field(f(3), cols[3], line)?),
                raw_reward: parse_field(f(4), cols[4], line)?,
                shaped_reward: parse_field(f(5), cols[5], line)?,
                mi_bits: parse_opt(f(6), cols[6], line)?,
                lambda_bits: parse_opt(f(7), cols[7], line)?,
                epsilon: parse_field(f(8), cols[8], line)?,
                observable: parse_opt(f(9), cols[9], line)?,
            });
        }
        Ok(Self { rows, slots_per_day })
    }

    pub fn write_adversary_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(ADVERSARY_HEADER.split(','))?;
        for s in self.action_trace()?.samples() {
            out.write_record([s.day.to_string(), s.slot.to_string(), s.action.0.to_string()])?;
        }
        out.flush().map_err(|e| Error::io("adversary-input.csv", e))?;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file))
            .map_err(|e| e.context(path.display()))
    }

    pub fn load(path: &Path, slots_per_day: usize) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv(std::io::BufReader::new(file), slots_per_day).map_err(|e| e.context(path.display()))
    }
}

/// Read an `adversary-input.csv` back into a trace.
pub fn read_adversary_csv<R: Read>(r: R) -> Result<ActionTrace> {
    let mut reader = csv::Reader::from_reader(r);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != ADVERSARY_HEADER {
        return Err(Error::Parse {
            context: "adversary-input.csv header".into(),
            message: format!("expected '{ADVERSARY_HEADER}', got '{}'", header.join(",")),
        });
    }
    let mut samples = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let f = |i: usize| rec.get(i).unwrap_or("");
        samples.push(TraceSample {
            day: parse_field(f(0), "day", line)?,
            slot: parse_field(f(1), "slot", line)?,
            action: ActionId(parse_field(f(2), "emitted_action", line)?),
        });
    }
    ActionTrace::new(samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunRecord {
        RunRecord {
            rows: vec![
                RunRow {
                    t: 0,
                    state: StateId(1),
                    chosen_action: ActionId(3),
                    emitted_action: ActionId(7),
                    raw_reward: 0.1 + 0.2,
                    shaped_reward: -1.0 / 3.0,
                    mi_bits: Some(0.0),
                    lambda_bits: Some(1e-300),
                    epsilon: 0.9,
                    observable: None,
                },
                RunRow {
                    t: 1,
                    state: StateId(0),
                    chosen_action: ActionId(0),
                    emitted_action: ActionId(0),
                    raw_reward: 9.999999999999998,
                    shaped_reward: 9.999999999999998,
                    mi_bits: None,
                    lambda_bits: None,
                    epsilon: 0.1,
                    observable: Some(-0.25),
                },
            ],
            slots_per_day: 240,
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let rec = sample();
        let mut buf = Vec::new();
        rec.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), RUN_HEADER);
        assert_eq!(RunRecord::read_csv(buf.as_slice(), 240).unwrap(), rec);
    }

    #[test]
    fn adversary_csv_has_only_clock_and_action() {
        let mut buf = Vec::new();
        sample().write_adversary_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text, "day,slot,emitted_action\n0,0,7\n0,1,0\n");
        let trace = read_adversary_csv(buf.as_slice()).unwrap();
        assert_eq!(trace, sample().action_trace().unwrap());
    }

    #[test]
    fn bad_header_and_field_are_reported() {
        assert!(RunRecord::read_csv("a,b\n1,2\n".as_bytes(), 240).is_err());
        let bad = format!("{RUN_HEADER}\n0,x,0,0,0,0,,,0.5,\n");
        let err = RunRecord::read_csv(bad.as_bytes(), 240).unwrap_err().to_string();
        assert!(err.contains("state"), "{err}");
    }
}
