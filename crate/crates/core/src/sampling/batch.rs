use rayon::prelude::*;

use crate::load_cases::{classify_validity, evaluate_frame, SimulationConfig, Validity};

use super::{DesignTable, ResultRow, ResultTable};

/// Evaluates and classifies every design. Output order is input order.
pub fn run_batch(table: &DesignTable, config: &SimulationConfig) -> ResultTable {
    let rows: Vec<ResultRow> = table
        .rows
        .par_iter()
        .map(|row| {
            let record = evaluate_frame(&row.params, config);
            ResultRow { id: row.id, record, validity: classify_validity(&record, config.fos_threshold) }
        })
        .collect();
    let out = ResultTable { rows };
    log_counts(&out);
    out
}

/// [`run_batch`] on a dedicated pool of `jobs` worker threads.
pub fn run_batch_with_jobs(
    table: &DesignTable,
    config: &SimulationConfig,
    jobs: usize,
) -> Result<ResultTable, rayon::ThreadPoolBuildError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    Ok(pool.install(|| run_batch(table, config)))
}

fn log_counts(table: &ResultTable) {
    let mut counts = [0usize; Validity::ALL.len()];
    for row in &table.rows {
        counts[row.validity.index()] += 1;
    }
    for v in Validity::ALL {
        log::info!("{:>20}: {}", v.as_str(), counts[v.index()]);
    }
}
