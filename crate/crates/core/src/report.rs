//! Flat result rows shared by every command, with CSV and JSON writers.

use std::io::Write;

use serde::Serialize;
use serde_json::Value as Json;

use crate::error::Result;

pub const CSV_HEADER: &str = "spec,gamma,metric,value,tolerance,pass";

/// JSON numbers this close to zero are written as strings.
pub const TINY: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Int(x as i64)
    }
}

impl From<bool> for Value {
    fn from(x: bool) -> Self {
        Value::Bool(x)
    }
}

impl From<String> for Value {
    fn from(x: String) -> Self {
        Value::Text(x)
    }
}

impl From<&str> for Value {
    fn from(x: &str) -> Self {
        Value::Text(x.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub spec: String,
    pub gamma: Option<f64>,
    pub metric: String,
    pub value: Value,
    pub tolerance: Option<f64>,
    pub pass: Option<bool>,
}

impl Row {
    pub fn info(spec: impl Into<String>, gamma: Option<f64>, metric: impl Into<String>, value: impl Into<Value>) -> Self {
        Self {
            spec: spec.into(),
            gamma,
            metric: metric.into(),
            value: value.into(),
            tolerance: None,
            pass: None,
        }
    }

    /// A check that passes when `|value| <= tolerance`.
    pub fn at_most(spec: impl Into<String>, gamma: Option<f64>, metric: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            pass: Some(value.abs() <= tolerance),
            tolerance: Some(tolerance),
            ..Self::info(spec, gamma, metric, value)
        }
    }

    pub fn check(
        spec: impl Into<String>,
        gamma: Option<f64>,
        metric: impl Into<String>,
        value: impl Into<Value>,
        tolerance: Option<f64>,
        pass: bool,
    ) -> Self {
        Self {
            tolerance,
            pass: Some(pass),
            ..Self::info(spec, gamma, metric, value)
        }
    }

    pub fn failed(&self) -> bool {
        self.pass == Some(false)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub spec: String,
    pub gamma: Option<f64>,
    pub metric: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<C: Serialize> {
    pub command: String,
    pub config: C,
    pub rows: Vec<Row>,
    pub failures: Vec<Failure>,
}

impl<C: Serialize> Report<C> {
    pub fn new(command: impl Into<String>, config: C, rows: Vec<Row>) -> Self {
        let failures = rows
            .iter()
            .filter(|r| r.failed())
            .map(|r| Failure {
                spec: r.spec.clone(),
                gamma: r.gamma,
                metric: r.metric.clone(),
            })
            .collect();
        Self {
            command: command.into(),
            config,
            rows,
            failures,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        let mut v = serde_json::to_value(self)?;
        stringify_tiny(&mut v);
        serde_json::to_writer_pretty(&mut out, &v)?;
        writeln!(out)?;
        Ok(())
    }

    /// Rows, then a `#` trailer listing failures when there are any.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                csv_text(&r.spec),
                r.gamma.map(fmt_num).unwrap_or_default(),
                csv_text(&r.metric),
                csv_value(&r.value),
                r.tolerance.map(fmt_num).unwrap_or_default(),
                r.pass.map(|p| p.to_string()).unwrap_or_default(),
            )?;
        }
        if !self.failures.is_empty() {
            writeln!(out, "# failures,{}", self.failures.len())?;
            for f in &self.failures {
                writeln!(
                    out,
                    "# fail,{},{},{}",
                    csv_text(&f.spec),
                    f.gamma.map(fmt_num).unwrap_or_default(),
                    csv_text(&f.metric)
                )?;
            }
        }
        Ok(())
    }
}

/// Scientific notation with 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_value(v: &Value) -> String {
    match v {
        Value::Num(x) => fmt_num(*x),
        Value::Int(i) => i.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Text(s) => csv_text(s),
    }
}

fn stringify_tiny(v: &mut Json) {
    match v {
        Json::Number(n) => {
            if let Some(x) = n.as_f64() {
                if x != 0.0 && x.abs() < TINY {
                    *v = Json::String(fmt_num(x));
                }
            }
        }
        Json::Array(items) => items.iter_mut().for_each(stringify_tiny),
        Json::Object(map) => map.values_mut().for_each(stringify_tiny),
        _ => {}
    }
}
