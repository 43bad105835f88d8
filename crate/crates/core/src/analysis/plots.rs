//! Static plot data: pairwise scatter tables, histogram bin tables and a
//! correlation heatmap in SVG.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::sampling::ResultTable;

use super::{pareto_front, pearson_matrix, CorrelationMatrix, ObjectiveSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PlotOptions {
    /// Histogram bin count; Sturges when `None`.
    pub bins: Option<usize>,
}

/// ceil(log2 n) + 1, and 1 for n <= 1.
pub fn sturges_bins(n: usize) -> usize {
    if n <= 1 {
        1
    } else {
        (n as f64).log2().ceil() as usize + 1
    }
}

/// Writes `scatter_<a>__<b>.csv` for every objective pair,
/// `hist_<objective>.csv` for every objective and `correlation.svg`.
/// Returns the written paths in creation order.
pub fn emit_plots(
    results: &ResultTable,
    spec: &ObjectiveSpec,
    out_dir: &Path,
    options: &PlotOptions,
) -> io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let front: BTreeSet<u64> = pareto_front(results, spec).unwrap_or_default();
    let labels = spec.labels();
    let objectives = spec.objectives();

    // Ok rows only: (id, validity, transformed values)
    let points: Vec<_> = results
        .rows
        .iter()
        .filter_map(|r| {
            let v: Option<Vec<f64>> = objectives.iter().map(|o| o.value(&r.record)).collect();
            v.map(|v| (r.id, r.validity, v))
        })
        .collect();

    let mut written = Vec::new();
    for i in 0..objectives.len() {
        for j in i + 1..objectives.len() {
            let path = out_dir.join(format!("scatter_{}__{}.csv", labels[i], labels[j]));
            let mut w = BufWriter::new(File::create(&path)?);
            writeln!(w, "row_id,{},{},validity,pareto", labels[i], labels[j])?;
            for (id, validity, v) in &points {
                writeln!(w, "{id},{},{},{validity},{}", v[i], v[j], front.contains(id))?;
            }
            w.flush()?;
            written.push(path);
        }
    }

    for (i, label) in labels.iter().enumerate() {
        let column: Vec<f64> = points.iter().map(|p| p.2[i]).collect();
        let bins = options.bins.unwrap_or_else(|| sturges_bins(column.len())).max(1);
        let path = out_dir.join(format!("hist_{label}.csv"));
        let mut w = BufWriter::new(File::create(&path)?);
        writeln!(w, "bin_lower,bin_upper,count")?;
        for (lo, hi, count) in histogram(&column, bins) {
            writeln!(w, "{lo},{hi},{count}")?;
        }
        w.flush()?;
        written.push(path);
    }

    let matrix = pearson_matrix(results, spec).unwrap_or_else(|_| CorrelationMatrix::undefined(labels.clone()));
    let path = out_dir.join("correlation.svg");
    std::fs::write(&path, heatmap_svg(&matrix))?;
    written.push(path);
    Ok(written)
}

/// Equal-width bins over [min, max]; the last bin is closed. An empty column
/// has no bins and a constant column has one.
fn histogram(column: &[f64], bins: usize) -> Vec<(f64, f64, usize)> {
    let finite: Vec<f64> = column.iter().copied().filter(|v| v.is_finite()).collect();
    let Some(lo) = finite.iter().copied().reduce(f64::min) else {
        return Vec::new();
    };
    let hi = finite.iter().copied().fold(lo, f64::max);
    if hi == lo {
        return vec![(lo, hi, finite.len())];
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for v in &finite {
        let k = (((v - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            let upper = if k + 1 == bins { hi } else { lo + width * (k + 1) as f64 };
            (lo + width * k as f64, upper, c)
        })
        .collect()
}

/// Diverging blue-white-red ramp on [-1, 1].
fn color(r: f64) -> String {
    let (cold, hot, white) = ([59.0, 76.0, 192.0], [180.0, 4.0, 38.0], [247.0, 247.0, 247.0]);
    let (end, t) = if r < 0.0 { (cold, -r) } else { (hot, r) };
    let c: Vec<u8> = (0..3).map(|i| (white[i] + (end[i] - white[i]) * t).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

fn heatmap_svg(m: &CorrelationMatrix) -> String {
    const CELL: usize = 80;
    const MARGIN: usize = 260;
    let n = m.labels.len();
    let size = MARGIN + n * CELL + 20;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{size}" height="{size}" fill="white"/>"#);
    for (i, label) in m.labels.iter().enumerate() {
        let c = MARGIN + i * CELL + CELL / 2;
        let _ = writeln!(s, r#"<text x="{}" y="{c}" text-anchor="end" dominant-baseline="middle">{label}</text>"#, MARGIN - 8);
        let _ = writeln!(
            s,
            r#"<text x="{c}" y="{}" text-anchor="start" transform="rotate(-90 {c} {})">{label}</text>"#,
            MARGIN - 8,
            MARGIN - 8
        );
    }
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (MARGIN + j * CELL, MARGIN + i * CELL);
            let (fill, text) = match m.get(i, j) {
                Some(r) => (color(r), format!("{r:.2}")),
                None => ("#cccccc".to_string(), "n/a".to_string()),
            };
            let _ = writeln!(
                s,
                r#"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{fill}" stroke="white"/>"#
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" text-anchor="middle" dominant-baseline="middle">{text}</text>"#,
                x + CELL / 2,
                y + CELL / 2
            );
        }
    }
    s.push_str("</svg>\n");
    s
}
