//! Verification reports, serialized with `schema: 1`.

use serde::Serialize;
use serde_json::{json, Value};

use qslice::Quaternion;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Case {
    pub inputs: Value,
    pub expected: Value,
    pub actual: Value,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub tolerance: f64,
    pub max_residual: f64,
    pub pass: bool,
    pub cases: Vec<Case>,
}

impl Check {
    pub fn new(name: &str, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            tolerance,
            max_residual: 0.0,
            pass: true,
            cases: Vec::new(),
        }
    }

    pub fn record(&mut self, inputs: Value, expected: Value, actual: Value, residual: f64) {
        // NaN residuals fail
        if residual.is_nan() || residual > self.max_residual {
            self.max_residual = if residual.is_nan() { f64::INFINITY } else { residual };
        }
        self.pass = self.max_residual <= self.tolerance;
        self.cases.push(Case {
            inputs,
            expected,
            actual,
            residual,
        });
    }

    /// An exact (zero tolerance) comparison.
    pub fn record_exact(&mut self, inputs: Value, equal: bool) {
        self.record(inputs, json!(true), json!(equal), if equal { 0.0 } else { 1.0 });
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub suite: String,
    pub parameters: Value,
    pub checks: Vec<Check>,
    pub max_residual: f64,
    pub pass: bool,
    pub wall_time_s: f64,
}

impl VerificationReport {
    pub fn new(suite: &str, parameters: Value, checks: Vec<Check>, wall_time_s: f64) -> Self {
        let max_residual = checks.iter().map(|c| c.max_residual).fold(0.0, f64::max);
        let pass = checks.iter().all(|c| c.pass);
        Self {
            schema: SCHEMA,
            suite: suite.into(),
            parameters,
            checks,
            max_residual,
            pass,
            wall_time_s,
        }
    }

    /// The report without per-case records.
    pub fn summary(&self) -> Self {
        let mut s = self.clone();
        for c in &mut s.checks {
            c.cases.clear();
        }
        s
    }
}

pub fn quat_json(q: Quaternion) -> Value {
    json!([q.w, q.x, q.y, q.z])
}

/// `|a - b| / (1 + |b|)`.
pub fn rel_residual(a: Quaternion, b: Quaternion) -> f64 {
    (a - b).modulus() / (1.0 + b.modulus())
}
