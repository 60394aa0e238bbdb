//! Flat dotted-key configuration files.
//!
//! One assignment per line, `section.key = value`, with `#` comments:
//!
//! ```text
//! # reaction r s^beta (1 - s^delta)
//! model.r = 1.0
//! model.beta = 1.5
//! model.delta = 1.0
//! profile.kind = algebraic
//! profile.alpha = 1.0
//! profile.x0 = 2.0
//! solver.t_end = 100
//! solver.levels = 0.1, 0.3
//! ```
//!
//! Every diagnostic carries the line number, unknown keys are rejected, and a
//! `run.json` from a previous run is accepted in place of a config file (its
//! echoed `config` object is replayed verbatim, which reproduces the run).

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use anyhow::{bail, Context, Result};

#[derive(Debug)]
pub struct Config {
    /// key -> (raw value, 1-based line; 0 for values replayed from run.json).
    entries: BTreeMap<String, (String, usize)>,
    consumed: RefCell<BTreeSet<String>>,
}

impl Config {
    /// Parses config text; syntax errors name the offending line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<String, (String, usize)> = BTreeMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let n = idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let Some(eq) = line.find('=') else {
                bail!("config line {n}: expected `key = value`, got `{}`", line);
            };
            let key = line[..eq].trim().to_string();
            let value = line[eq + 1..].trim().to_string();
            if key.is_empty() {
                bail!("config line {n}: missing key before `=`");
            }
            if !key
                .chars()
                .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '.' || c == '_')
            {
                bail!("config line {n}: key `{key}` may only use lowercase, digits, `.` and `_`");
            }
            if value.is_empty() {
                bail!("config line {n}: key `{key}` has no value");
            }
            if let Some((_, first)) = entries.get(&key) {
                bail!("config line {n}: duplicate key `{key}` (first set on line {first})");
            }
            entries.insert(key, (value, n));
        }
        Ok(Self {
            entries,
            consumed: RefCell::new(BTreeSet::new()),
        })
    }

    /// Loads a config file, or replays the `config` echo of a `run.json`.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        if text.trim_start().starts_with('{') {
            let value: serde_json::Value = serde_json::from_str(&text)
                .with_context(|| format!("{} looks like JSON but does not parse", path.display()))?;
            let map = value
                .get("config")
                .and_then(|c| c.as_object())
                .with_context(|| {
                    format!("{} has no `config` object to replay", path.display())
                })?;
            let mut entries = BTreeMap::new();
            for (k, v) in map {
                let raw = v
                    .as_str()
                    .with_context(|| format!("replayed key `{k}` is not a string"))?;
                entries.insert(k.clone(), (raw.to_string(), 0));
            }
            return Ok(Self {
                entries,
                consumed: RefCell::new(BTreeSet::new()),
            });
        }
        Self::parse(&text)
    }

    /// The raw key/value map, echoed into `run.json` for exact replays.
    pub fn raw(&self) -> BTreeMap<String, String> {
        self.entries
            .iter()
            .map(|(k, (v, _))| (k.clone(), v.clone()))
            .collect()
    }

    fn get(&self, key: &str) -> Option<&(String, usize)> {
        let found = self.entries.get(key);
        if found.is_some() {
            self.consumed.borrow_mut().insert(key.to_string());
        }
        found
    }

    /// Line a key was set on (for diagnostics about its value).
    pub fn line(&self, key: &str) -> usize {
        self.entries.get(key).map(|(_, n)| *n).unwrap_or(0)
    }

    pub fn str_opt(&self, key: &str) -> Option<String> {
        self.get(key).map(|(v, _)| v.clone())
    }

    pub fn str_req(&self, key: &str) -> Result<String> {
        self.str_opt(key)
            .with_context(|| format!("config is missing required key `{key}`"))
    }

    pub fn f64_opt(&self, key: &str) -> Result<Option<f64>> {
        match self.get(key) {
            None => Ok(None),
            Some((v, n)) => v
                .parse::<f64>()
                .map(Some)
                .with_context(|| format!("config line {n}: {key} = `{v}`: expected a number")),
        }
    }

    pub fn f64_req(&self, key: &str) -> Result<f64> {
        match self.f64_opt(key)? {
            Some(v) => Ok(v),
            None => bail!("config is missing required key `{key}`"),
        }
    }

    pub fn usize_opt(&self, key: &str) -> Result<Option<usize>> {
        match self.get(key) {
            None => Ok(None),
            Some((v, n)) => v.parse::<usize>().map(Some).with_context(|| {
                format!("config line {n}: {key} = `{v}`: expected a non-negative integer")
            }),
        }
    }

    pub fn bool_opt(&self, key: &str) -> Result<Option<bool>> {
        match self.get(key) {
            None => Ok(None),
            Some((v, n)) => match v.as_str() {
                "true" | "yes" | "on" => Ok(Some(true)),
                "false" | "no" | "off" => Ok(Some(false)),
                _ => bail!("config line {n}: {key} = `{v}`: expected true or false"),
            },
        }
    }

    /// Comma-separated list of numbers.
    pub fn f64_list_opt(&self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.get(key) {
            None => Ok(None),
            Some((v, n)) => {
                let mut out = Vec::new();
                for part in v.split(',') {
                    let part = part.trim();
                    if part.is_empty() {
                        continue;
                    }
                    out.push(part.parse::<f64>().with_context(|| {
                        format!("config line {n}: {key}: `{part}` is not a number")
                    })?);
                }
                if out.is_empty() {
                    bail!("config line {n}: {key} lists no values");
                }
                Ok(Some(out))
            }
        }
    }

    /// Exactly two comma-separated numbers, e.g. `fit.window = 50, 150`.
    pub fn f64_pair_opt(&self, key: &str) -> Result<Option<(f64, f64)>> {
        match self.f64_list_opt(key)? {
            None => Ok(None),
            Some(v) if v.len() == 2 => Ok(Some((v[0], v[1]))),
            Some(v) => bail!(
                "config line {}: {key} needs exactly two values, got {}",
                self.line(key),
                v.len()
            ),
        }
    }

    /// Comma-separated `a:b` pairs, e.g. `sweep.cells = 0.5:2.0, 1:1.4`.
    /// The literal value `none` spells an empty list.
    pub fn pair_list_req(&self, key: &str) -> Result<Vec<(f64, f64)>> {
        let Some((v, n)) = self.get(key) else {
            bail!("config is missing required key `{key}`");
        };
        if v == "none" {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for part in v.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let Some((a, b)) = part.split_once(':') else {
                bail!("config line {n}: {key}: `{part}` is not an `alpha:beta` pair");
            };
            let a: f64 = a.trim().parse().with_context(|| {
                format!("config line {n}: {key}: `{part}` has a bad first number")
            })?;
            let b: f64 = b.trim().parse().with_context(|| {
                format!("config line {n}: {key}: `{part}` has a bad second number")
            })?;
            out.push((a, b));
        }
        if out.is_empty() {
            bail!("config line {n}: {key} lists no cells");
        }
        Ok(out)
    }

    /// Errors if any key was never read by the pipeline, naming each one.
    pub fn ensure_fully_consumed(&self) -> Result<()> {
        let consumed = self.consumed.borrow();
        let unknown: Vec<String> = self
            .entries
            .iter()
            .filter(|(k, _)| !consumed.contains(*k))
            .map(|(k, (_, n))| format!("`{k}` (line {n})"))
            .collect();
        if !unknown.is_empty() {
            bail!(
                "unrecognized (or unused by this subcommand) config key(s): {}",
                unknown.join(", ")
            );
        }
        Ok(())
    }
}
