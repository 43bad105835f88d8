use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::load_cases::Validity;
use crate::sampling::ResultTable;

use super::{AnalysisError, ObjectiveSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ValidityCounts {
    pub valid: usize,
    pub structural_failure: usize,
    pub geometric_infeasible: usize,
    pub build_failed: usize,
    pub sim_failed: usize,
}

impl ValidityCounts {
    pub fn get(&self, v: Validity) -> usize {
        match v {
            Validity::Valid => self.valid,
            Validity::StructuralFailure => self.structural_failure,
            Validity::GeometricInfeasible => self.geometric_infeasible,
            Validity::BuildFailed => self.build_failed,
            Validity::SimFailed => self.sim_failed,
        }
    }

    fn slot(&mut self, v: Validity) -> &mut usize {
        match v {
            Validity::Valid => &mut self.valid,
            Validity::StructuralFailure => &mut self.structural_failure,
            Validity::GeometricInfeasible => &mut self.geometric_infeasible,
            Validity::BuildFailed => &mut self.build_failed,
            Validity::SimFailed => &mut self.sim_failed,
        }
    }

    pub fn total(&self) -> usize {
        Validity::ALL.iter().map(|&v| self.get(v)).sum()
    }
}

pub fn validity_breakdown(results: &ResultTable) -> ValidityCounts {
    let mut counts = ValidityCounts::default();
    for row in &results.rows {
        *counts.slot(row.validity) += 1;
    }
    counts
}

/// Pearson coefficients between objectives. An entry is `None` when either
/// column has zero variance; the diagonal is 1 for every other column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    pub values: Vec<Vec<Option<f64>>>,
    /// Rows that entered the computation.
    pub samples: usize,
}

impl CorrelationMatrix {
    pub fn undefined(labels: Vec<String>) -> Self {
        let n = labels.len();
        CorrelationMatrix { labels, values: vec![vec![None; n]; n], samples: 0 }
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.values[i][j]
    }

    /// Square table with a label column; undefined entries are empty.
    pub fn write_csv(&self, path: &Path) -> io::Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "objective,{}", self.labels.join(","))?;
        for (label, row) in self.labels.iter().zip(&self.values) {
            let cells: Vec<String> = row.iter().map(|v| v.map(|x| x.to_string()).unwrap_or_default()).collect();
            writeln!(w, "{label},{}", cells.join(","))?;
        }
        w.flush()
    }
}

/// Single-pass co-moment accumulation over the transformed objectives of
/// the Ok rows.
pub fn pearson_matrix(results: &ResultTable, spec: &ObjectiveSpec) -> Result<CorrelationMatrix, AnalysisError> {
    let k = spec.len();
    let mut n = 0usize;
    let mut mean = vec![0.0; k];
    let mut comoment = vec![vec![0.0; k]; k];
    let mut delta = vec![0.0; k];

    for row in &results.rows {
        let Some(x) = spec.objectives().iter().map(|o| o.value(&row.record)).collect::<Option<Vec<f64>>>() else {
            continue;
        };
        n += 1;
        let inv = 1.0 / n as f64;
        for i in 0..k {
            delta[i] = x[i] - mean[i];
            mean[i] += delta[i] * inv;
        }
        // C_ij += (x_i - old mean_i)(x_j - new mean_j)
        for i in 0..k {
            for j in i..k {
                comoment[i][j] += delta[i] * (x[j] - mean[j]);
            }
        }
    }
    if n < 2 {
        return Err(AnalysisError::InsufficientData(n));
    }

    let mut values = vec![vec![None; k]; k];
    for i in 0..k {
        if comoment[i][i] > 0.0 {
            values[i][i] = Some(1.0);
        }
        for j in i + 1..k {
            let denom = (comoment[i][i] * comoment[j][j]).sqrt();
            if comoment[i][i] > 0.0 && comoment[j][j] > 0.0 && denom > 0.0 {
                let r = (comoment[i][j] / denom).clamp(-1.0, 1.0);
                values[i][j] = Some(r);
                values[j][i] = Some(r);
            }
        }
    }
    Ok(CorrelationMatrix { labels: spec.labels(), values, samples: n })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub median: f64,
}

/// `None` for an empty column.
pub fn summarize(column: &[f64]) -> Option<Summary> {
    if column.is_empty() {
        return None;
    }
    let mut sorted = column.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let median = if n % 2 == 1 { sorted[n / 2] } else { 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]) };
    Some(Summary {
        count: n,
        min: sorted[0],
        max: sorted[n - 1],
        mean: sorted.iter().sum::<f64>() / n as f64,
        median,
    })
}
