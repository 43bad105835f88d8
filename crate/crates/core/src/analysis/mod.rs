//! Dataset post-processing: validity counts, non-dominated sets, objective
//! correlations, summary statistics and plot data.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::fea::ConvergenceRow;
use crate::load_cases::{LoadCaseId, PerformanceField, PerformanceRecord};
use crate::sampling::ResultTable;

mod pareto;
mod plots;
mod stats;

pub use pareto::{dominates, pareto_front};
pub use plots::{emit_plots, sturges_bins, PlotOptions};
pub use stats::{pearson_matrix, summarize, validity_breakdown, CorrelationMatrix, Summary, ValidityCounts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Transform {
    Identity,
    AbsoluteValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Objective {
    pub field: PerformanceField,
    pub direction: Direction,
    pub transform: Transform,
}

impl Objective {
    pub fn new(field: PerformanceField, direction: Direction, transform: Transform) -> Self {
        Objective { field, direction, transform }
    }

    /// Column label, e.g. `abs_mass`.
    pub fn label(&self) -> String {
        match self.transform {
            Transform::Identity => self.field.name().to_string(),
            Transform::AbsoluteValue => format!("abs_{}", self.field.name()),
        }
    }

    /// Transformed value, or `None` if the record has no values.
    pub fn value(&self, record: &PerformanceRecord) -> Option<f64> {
        let v = record.get(self.field)?;
        Some(match self.transform {
            Transform::Identity => v,
            Transform::AbsoluteValue => v.abs(),
        })
    }

    /// Transformed value oriented so that smaller is better.
    pub fn cost(&self, record: &PerformanceRecord) -> Option<f64> {
        let v = self.value(record)?;
        Some(match self.direction {
            Direction::Minimize => v,
            Direction::Maximize => -v,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("no rows with status Ok")]
    EmptyInput,
    #[error("at least 2 rows with status Ok are required, found {0}")]
    InsufficientData(usize),
    #[error("objective `{0}` appears more than once")]
    DuplicateObjective(String),
    #[error("objective spec is empty")]
    EmptySpec,
}

/// Ordered list of objectives with unique fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObjectiveSpec {
    objectives: Vec<Objective>,
}

impl ObjectiveSpec {
    pub fn new(objectives: Vec<Objective>) -> Result<Self, AnalysisError> {
        if objectives.is_empty() {
            return Err(AnalysisError::EmptySpec);
        }
        let mut seen = BTreeSet::new();
        for o in &objectives {
            if !seen.insert(o.field) {
                return Err(AnalysisError::DuplicateObjective(o.field.name().to_string()));
            }
        }
        Ok(ObjectiveSpec { objectives })
    }

    pub fn objectives(&self) -> &[Objective] {
        &self.objectives
    }

    pub fn len(&self) -> usize {
        self.objectives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objectives.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.objectives.iter().map(Objective::label).collect()
    }
}

impl Default for ObjectiveSpec {
    /// Three absolute deflections, in-plane safety factor and mass.
    fn default() -> Self {
        use Direction::*;
        use PerformanceField::*;
        use Transform::*;
        ObjectiveSpec {
            objectives: vec![
                Objective::new(InplaneDropoutVerticalDisp, Minimize, AbsoluteValue),
                Objective::new(TransverseBbLateralDisp, Minimize, AbsoluteValue),
                Objective::new(EccentricBbTwist, Minimize, AbsoluteValue),
                Objective::new(InplaneSafetyFactor, Maximize, Identity),
                Objective::new(Mass, Minimize, Identity),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObjectiveSummary {
    pub objective: String,
    #[serde(flatten)]
    pub summary: Option<Summary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub row_count: usize,
    pub validity_counts: ValidityCounts,
    pub objectives: Vec<Objective>,
    pub non_dominated_ids: Vec<u64>,
    pub correlation_matrix: CorrelationMatrix,
    pub summaries: Vec<ObjectiveSummary>,
}

/// Runs every analysis. Data too thin for the front or the correlations
/// yields an empty front or an all-undefined matrix rather than an error.
pub fn analyze(results: &ResultTable, spec: &ObjectiveSpec) -> AnalysisReport {
    let non_dominated_ids = match pareto_front(results, spec) {
        Ok(ids) => ids.into_iter().collect(),
        Err(e) => {
            log::warn!("pareto front: {e}");
            Vec::new()
        }
    };
    let correlation_matrix = pearson_matrix(results, spec).unwrap_or_else(|e| {
        log::warn!("correlation matrix: {e}");
        CorrelationMatrix::undefined(spec.labels())
    });
    let summaries = spec
        .objectives()
        .iter()
        .map(|o| {
            let column: Vec<f64> = results.rows.iter().filter_map(|r| o.value(&r.record)).collect();
            ObjectiveSummary { objective: o.label(), summary: summarize(&column) }
        })
        .collect();
    AnalysisReport {
        row_count: results.len(),
        validity_counts: validity_breakdown(results),
        objectives: spec.objectives().to_vec(),
        non_dominated_ids,
        correlation_matrix,
        summaries,
    }
}

/// Writes `report.json` and `correlation.csv` into `dir`.
pub fn write_report(dir: &Path, report: &AnalysisReport) -> io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut json = serde_json::to_string_pretty(report).map_err(io::Error::other)?;
    json.push('\n');
    std::fs::write(dir.join("report.json"), json)?;
    report.correlation_matrix.write_csv(&dir.join("correlation.csv"))
}

/// `size` rows drawn uniformly without replacement, kept in file order.
/// Tables no larger than `size` are returned whole.
pub fn sample_subset(results: &ResultTable, size: usize, seed: u64) -> ResultTable {
    if size >= results.len() {
        return results.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, results.len(), size).into_vec();
    picked.sort_unstable();
    ResultTable { rows: picked.into_iter().map(|i| results.rows[i].clone()).collect() }
}

/// Writes a subdivision sweep as CSV: one row per level with the case's
/// quantities and the frame mass. Failed levels leave the value cells empty.
pub fn write_convergence_table(path: &Path, case: LoadCaseId, rows: &[ConvergenceRow]) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let mut header = vec!["elements_per_tube".to_string(), "status".to_string()];
    header.extend(case.fields().iter().map(|f| f.name().to_string()));
    header.push("mass".into());
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        let mut cells = vec![row.elements_per_tube.to_string()];
        match &row.outcome {
            Ok(m) => {
                cells.push("Ok".into());
                cells.extend(case.fields().iter().map(|&f| m.get(f).map(|v| v.to_string()).unwrap_or_default()));
            }
            Err(status) => {
                cells.push(status.as_str().into());
                cells.extend(case.fields().iter().map(|_| String::new()));
            }
        }
        cells.push(row.mass.map(|m| m.to_string()).unwrap_or_default());
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()
}
