//! Flat `key = value` text with dotted keys.
//!
//! ```text
//! # comment
//! steps = 8000
//! mitigation.kind = adaparl
//!
//! [thermal]          # later keys get the `thermal.` prefix
//! r_eq = 0.0054
//! ```

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValues {
    entries: BTreeMap<String, (String, usize)>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| parse_error(line_no, "unterminated section header"))?
                    .trim();
                if !valid_key(name) && !name.is_empty() {
                    return Err(parse_error(line_no, format!("bad section name '{name}'")));
                }
                section = name.to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_error(line_no, format!("expected key = value, got '{line}'")))?;
            let key = key.trim();
            if !valid_key(key) {
                return Err(parse_error(line_no, format!("bad key '{key}'")));
            }
            let full = if section.is_empty() {
                key.to_string()
            } else {
                format!("{section}.{key}")
            };
            if entries.contains_key(&full) {
                return Err(parse_error(line_no, format!("duplicate key '{full}'")));
            }
            entries.insert(full, (value.trim().to_string(), line_no));
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| e.context(path.display()))
    }

    pub fn insert(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries.insert(key.into(), (value.into(), 0));
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Keys beginning with `prefix.`, with the prefix removed.
    pub fn keys_under<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.entries
            .keys()
            .filter_map(move |k| k.strip_prefix(prefix).and_then(|r| r.strip_prefix('.')))
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| Error::config(key, format!("cannot parse '{v}': {e}"))),
        }
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    /// Comma-separated list.
    pub fn get_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: Display,
    {
        let Some(v) = self.raw(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse()
                    .map_err(|e| Error::config(key, format!("cannot parse list item '{s}': {e}")))
            })
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }

    /// Fail on any key not in `known` (exact) or under one of `prefixes`.
    pub fn reject_unknown(&self, known: &[&str], prefixes: &[&str]) -> Result<()> {
        for key in self.entries.keys() {
            let ok = known.contains(&key.as_str())
                || prefixes
                    .iter()
                    .any(|p| key.strip_prefix(p).is_some_and(|r| r.starts_with('.')));
            if !ok {
                return Err(Error::config(key.clone(), "unknown key"));
            }
        }
        Ok(())
    }

    /// Sorted `key = value` lines.
    pub fn render(&self) -> String {
        self.entries.iter().map(|(k, (v, _))| format!("{k} = {v}\n")).collect()
    }
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(before, _)| before)
}

fn valid_key(key: &str) -> bool {
    !key.is_empty()
        && key
            .split('.')
            .all(|part| !part.is_empty() && part.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-'))
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        context: format!("line {line}"),
        message: message.into(),
    }
}
