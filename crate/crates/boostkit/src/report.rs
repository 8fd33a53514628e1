//! Machine-readable scenario reports.
//!
//! Reports serialize deterministically: keys keep insertion order and every
//! float is written with 17 significant digits. Non-finite floats become `null`.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::linalg::C64;

/// JSON number with 17 significant digits, or `null` when not finite.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let x = if x == 0.0 { 0.0 } else { x };
    Number::from_str(&format!("{x:.16e}"))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

pub fn complex(z: C64) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), float(z.re));
    m.insert("im".into(), float(z.im));
    Value::Object(m)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    Real(f64),
    Complex(C64),
    Integer(i64),
    Vector(Vec<f64>),
    ComplexVector(Vec<C64>),
    Matrix(Vec<Vec<f64>>),
    Text(String),
}

impl Quantity {
    pub fn to_json(&self) -> Value {
        match self {
            Quantity::Real(x) => float(*x),
            Quantity::Complex(z) => complex(*z),
            Quantity::Integer(i) => Value::from(*i),
            Quantity::Vector(v) => Value::Array(v.iter().map(|x| float(*x)).collect()),
            Quantity::ComplexVector(v) => Value::Array(v.iter().map(|z| complex(*z)).collect()),
            Quantity::Matrix(rows) => Value::Array(
                rows.iter()
                    .map(|r| Value::Array(r.iter().map(|x| float(*x)).collect()))
                    .collect(),
            ),
            Quantity::Text(s) => Value::String(s.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    /// Pass iff `value < bound`.
    Below(f64),
    /// Pass iff `lower ≤ value ≤ upper`.
    Within(f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub name: String,
    pub value: f64,
    pub tolerance: Tolerance,
}

impl Residual {
    pub fn below(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Residual {
            name: name.into(),
            value,
            tolerance: Tolerance::Below(bound),
        }
    }

    pub fn within(name: impl Into<String>, value: f64, lower: f64, upper: f64) -> Self {
        Residual {
            name: name.into(),
            value,
            tolerance: Tolerance::Within(lower, upper),
        }
    }

    pub fn passed(&self) -> bool {
        match self.tolerance {
            Tolerance::Below(b) => self.value < b,
            Tolerance::Within(lo, hi) => self.value >= lo && self.value <= hi,
        }
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), Value::String(self.name.clone()));
        m.insert("value".into(), float(self.value));
        match self.tolerance {
            Tolerance::Below(b) => {
                m.insert("tolerance".into(), float(b));
            }
            Tolerance::Within(lo, hi) => {
                m.insert("lower".into(), float(lo));
                m.insert("upper".into(), float(hi));
            }
        }
        m.insert("pass".into(), Value::Bool(self.passed()));
        Value::Object(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    /// Echo of the scenario as run.
    pub scenario: Value,
    pub results: Vec<(String, Quantity)>,
    pub residuals: Vec<Residual>,
    /// Set when the computation itself failed.
    pub error: Option<String>,
}

impl Report {
    pub fn new(scenario: Value) -> Self {
        Report {
            scenario,
            results: Vec::new(),
            residuals: Vec::new(),
            error: None,
        }
    }

    pub fn result(&mut self, name: impl Into<String>, value: Quantity) -> &mut Self {
        self.results.push((name.into(), value));
        self
    }

    pub fn residual(&mut self, residual: Residual) -> &mut Self {
        self.residuals.push(residual);
        self
    }

    pub fn status(&self) -> Status {
        if self.error.is_none() && self.residuals.iter().all(Residual::passed) {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn failed_residuals(&self) -> impl Iterator<Item = &Residual> {
        self.residuals.iter().filter(|r| !r.passed())
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("scenario".into(), self.scenario.clone());
        let results = self
            .results
            .iter()
            .map(|(name, q)| {
                let mut r = Map::new();
                r.insert("name".into(), Value::String(name.clone()));
                r.insert("value".into(), q.to_json());
                Value::Object(r)
            })
            .collect();
        m.insert("results".into(), Value::Array(results));
        m.insert(
            "residuals".into(),
            Value::Array(self.residuals.iter().map(Residual::to_json).collect()),
        );
        if let Some(e) = &self.error {
            m.insert("error".into(), Value::String(e.clone()));
        }
        m.insert("status".into(), Value::String(self.status().as_str().into()));
        Value::Object(m)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(&self.to_json()).expect("report values always serialize");
        out.push(b'\n');
        out
    }
}

/// Write to a sibling temporary file, then rename over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => Path::new(".").to_path_buf(),
    };
    fs::create_dir_all(&dir).map_err(io)?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io)
}
