//! JSON configuration files.
//!
//! ```json
//! {"dimension": 3, "points": [["1", "0", "0"], [0, 1, 0]]}
//! {"gram": [["1", "-1/3"], ["-1/3", "1"]], "dimension": 7}
//! ```
//!
//! Entries are `"p/q"` / decimal strings or JSON numbers. Unless `"mode"`
//! is given, the file is read exactly when every entry is a string or an
//! integer, and approximately otherwise. Optional keys: `"mode"`
//! (`"exact"` | `"approximate"`), `"normalize"` (scale exact points to unit
//! length) and `"tolerance"`.

use serde::Deserialize;
use serde_json::Value;

use super::{Configuration, DEFAULT_TOLERANCE};
use crate::exact::{parse_rational, Rational, RationalExt};
use crate::{Error, Exec, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Approximate,
}

/// Raw file contents before validation.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigurationFile {
    pub dimension: Option<usize>,
    pub points: Option<Vec<Vec<Value>>>,
    pub gram: Option<Vec<Vec<Value>>>,
    pub mode: Option<Mode>,
    #[serde(default)]
    pub normalize: bool,
    pub tolerance: Option<f64>,
}

fn config_err(msg: String) -> Error {
    Error::Configuration(msg)
}

fn exact_entry(path: &str, v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| config_err(format!("{path}: {e}"))),
        Value::Number(num) => {
            parse_rational(&num.to_string()).map_err(|e| config_err(format!("{path}: {e}")))
        }
        other => Err(config_err(format!("{path}: expected a string or number, got {other}"))),
    }
}

fn approx_entry(path: &str, v: &Value) -> Result<f64> {
    match v {
        Value::Number(num) => num
            .as_f64()
            .ok_or_else(|| config_err(format!("{path}: number out of range"))),
        Value::String(_) => exact_entry(path, v).map(|r| r.to_f64_lossy()),
        other => Err(config_err(format!("{path}: expected a string or number, got {other}"))),
    }
}

fn is_exact_entry(v: &Value) -> bool {
    match v {
        Value::String(_) => true,
        Value::Number(n) => n.is_i64() || n.is_u64(),
        _ => false,
    }
}

fn convert<T>(
    field: &str,
    rows: &[Vec<Value>],
    f: impl Fn(&str, &Value) -> Result<T>,
) -> Result<Vec<Vec<T>>> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, v)| f(&format!("{field}[{i}][{j}]"), v))
                .collect()
        })
        .collect()
}

impl ConfigurationFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| config_err(format!("invalid configuration JSON: {e}")))
    }

    /// Validates the file into a [`Configuration`]. A `tolerance` argument
    /// overrides the one in the file.
    pub fn into_configuration(self, tolerance: Option<f64>, exec: Exec) -> Result<Configuration> {
        let tolerance = tolerance.or(self.tolerance).unwrap_or(DEFAULT_TOLERANCE);
        let (field, rows) = match (&self.points, &self.gram) {
            (Some(p), None) => ("points", p),
            (None, Some(g)) => ("gram", g),
            (Some(_), Some(_)) => {
                return Err(config_err("give either \"points\" or \"gram\", not both".into()))
            }
            (None, None) => return Err(config_err("missing \"points\" or \"gram\"".into())),
        };
        let mode = self.mode.unwrap_or_else(|| {
            if rows.iter().flatten().all(is_exact_entry) {
                Mode::Exact
            } else {
                Mode::Approximate
            }
        });
        match (field, mode) {
            ("points", _) => {
                let dimension = self
                    .dimension
                    .ok_or_else(|| config_err("\"dimension\" is required with \"points\"".into()))?;
                match mode {
                    Mode::Exact => {
                        let pts = convert(field, rows, exact_entry)?;
                        if self.normalize {
                            Configuration::exact_directions(dimension, pts, exec)
                        } else {
                            Configuration::exact_points(dimension, pts, exec)
                        }
                    }
                    Mode::Approximate => {
                        let mut pts = convert(field, rows, approx_entry)?;
                        if self.normalize {
                            for p in &mut pts {
                                let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
                                if norm > 0.0 {
                                    p.iter_mut().for_each(|x| *x /= norm);
                                }
                            }
                        }
                        Configuration::approximate_points(dimension, pts, tolerance, exec)
                    }
                }
            }
            (_, Mode::Exact) => Configuration::exact_gram(convert(field, rows, exact_entry)?, self.dimension),
            (_, Mode::Approximate) => {
                let dimension = self.dimension.ok_or_else(|| {
                    config_err("\"dimension\" is required with an approximate \"gram\"".into())
                })?;
                Configuration::approximate_gram(convert(field, rows, approx_entry)?, dimension, tolerance)
            }
        }
    }
}

/// Parses and validates a configuration file.
pub fn parse_configuration(text: &str, tolerance: Option<f64>, exec: Exec) -> Result<Configuration> {
    ConfigurationFile::from_json(text)?.into_configuration(tolerance, exec)
}
