//! Row-by-row comparison of computed tables against golden values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub label: String,
    pub computed: f64,
    pub golden: f64,
    /// |computed − golden| in eV.
    pub deviation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub tolerance: f64,
    pub rows: Vec<ComparisonRow>,
    pub max_deviation: f64,
    pub mean_deviation: f64,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ComparisonRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn row(&self, label: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.label == label)
    }
}

/// Compares `(label, value)` pairs row by row; labels must match in order.
pub fn compare(computed: &[(String, f64)], golden: &[(String, f64)], tolerance: f64) -> Result<ComparisonReport> {
    if !(tolerance >= 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be non-negative, got {tolerance}")));
    }
    if computed.len() != golden.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} computed rows vs {} golden rows",
            computed.len(),
            golden.len()
        )));
    }
    let mut rows = Vec::with_capacity(computed.len());
    for ((cl, cv), (gl, gv)) in computed.iter().zip(golden) {
        if cl != gl {
            return Err(Error::LabelMismatch { computed: cl.clone(), golden: gl.clone() });
        }
        let deviation = (cv - gv).abs();
        rows.push(ComparisonRow { label: cl.clone(), computed: *cv, golden: *gv, deviation, pass: deviation <= tolerance });
    }
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    let mean_deviation = if rows.is_empty() { 0.0 } else { rows.iter().map(|r| r.deviation).sum::<f64>() / rows.len() as f64 };
    Ok(ComparisonReport { tolerance, rows, max_deviation, mean_deviation })
}
