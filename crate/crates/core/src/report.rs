//! Structured reports for grid scans and searches. Everything here
//! serializes to JSON with a fixed key order and a `schema` version field.

use serde::Serialize;

/// One axis of a Cartesian parameter grid.
#[derive(Debug, Clone, Serialize)]
pub struct AxisSpec {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn new(name: &str, min: f64, max: f64, count: usize) -> Self {
        Self { name: name.to_string(), min, max, count }
    }

    /// Grid value at index `i`; a single-point axis sits at `min`.
    pub fn value(&self, i: usize) -> f64 {
        if self.count <= 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }

    pub fn cell_width(&self) -> f64 {
        if self.count <= 1 { 0.0 } else { (self.max - self.min) / (self.count - 1) as f64 }
    }
}

/// A named parameter value attached to the worst-margin witness.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessParam {
    pub name: String,
    pub value: f64,
}

impl WitnessParam {
    pub fn new(name: &str, value: f64) -> Self {
        Self { name: name.to_string(), value }
    }
}

/// Outcome of a scan: the full grid description, the worst signed margin
/// seen, the parameters where it occurred, and the pass verdict
/// (`worst_margin >= -tolerance`).
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub inequality: String,
    pub grid: Vec<AxisSpec>,
    pub evaluated: u64,
    pub worst_margin: f64,
    pub witness: Vec<WitnessParam>,
    pub tolerance: f64,
    pub pass: bool,
    pub seconds: f64,
}
