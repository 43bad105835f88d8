use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::sampling::ResultTable;

use super::{AnalysisError, ObjectiveSpec};

/// `a` is no worse than `b` everywhere and strictly better somewhere.
/// Both are cost vectors (smaller is better).
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Less) => strictly = true,
            Some(Ordering::Equal) => {}
            _ => return false,
        }
    }
    strictly
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

/// Row ids of the Ok rows not dominated by any other Ok row.
///
/// Rows are visited in lexicographic cost order, in which no row can be
/// dominated by one that comes after it, so each row only needs to be tested
/// against the front found so far.
pub fn pareto_front(results: &ResultTable, spec: &ObjectiveSpec) -> Result<BTreeSet<u64>, AnalysisError> {
    let mut points: Vec<(u64, Vec<f64>)> = results
        .rows
        .iter()
        .filter_map(|row| {
            let costs: Option<Vec<f64>> = spec.objectives().iter().map(|o| o.cost(&row.record)).collect();
            costs.map(|c| (row.id, c))
        })
        .collect();
    if points.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    points.sort_by(|a, b| lexicographic(&a.1, &b.1).then(a.0.cmp(&b.0)));

    let mut front: Vec<&(u64, Vec<f64>)> = Vec::new();
    for p in &points {
        if !front.iter().any(|f| dominates(&f.1, &p.1)) {
            front.push(p);
        }
    }
    Ok(front.into_iter().map(|p| p.0).collect())
}
