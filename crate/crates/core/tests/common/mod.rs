#![allow(dead_code)]

use std::io::Write;

use bikeframe::fea::{BeamElement, BeamModel, ElasticConstants, FIXED};
use bikeframe::geometry::{tube_section_properties, Point3};
use bikeframe::load_cases::{PerformanceField, PerformanceRecord, PerformanceValues, Status, Validity};
use bikeframe::sampling::{ResultRow, ResultTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const STEEL_E: f64 = 205e9;
pub const STEEL_G: f64 = 80e9;

/// Straight tube from the origin along `axis`, clamped at node 0 and split
/// into `n` equal elements. The tip is node `n`.
pub fn cantilever(n: usize, od: f64, t: f64, length: f64, axis: Point3, e: f64, g: f64) -> BeamModel {
    let dir = axis.normalize();
    let nodes = (0..=n).map(|i| dir * (length * i as f64 / n as f64)).collect();
    let mut m = BeamModel::new(nodes);
    m.sections.push(tube_section_properties(od, t).unwrap());
    m.materials.push(ElasticConstants { elastic_modulus: e, shear_modulus: g });
    for i in 0..n {
        m.elements.push(BeamElement { nodes: [i, i + 1], section: 0, material: 0, kind: None });
    }
    m.constrain(0, FIXED);
    m
}

/// Second moment of area of a hollow circle, written out independently of
/// the library.
pub fn hollow_circle_i(od: f64, t: f64) -> f64 {
    let id = od - 2.0 * t;
    std::f64::consts::PI / 64.0 * (od.powi(4) - id.powi(4))
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Writes straight to the process stdout so the line shows up even when the
/// harness captures test output.
pub fn report(name: &str, pass: bool, detail: impl AsRef<str>) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "[acceptance] {verdict} {name}: {}", detail.as_ref());
    let _ = out.flush();
}

/// Random performance records on a coarse grid (so ties occur), with about
/// one row in ten failed.
pub fn random_results(n: usize, seed: u64) -> ResultTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|i| {
            if rng.gen_bool(0.1) {
                let status = [Status::GeometricInfeasible, Status::BuildFailed, Status::SimFailed][rng.gen_range(0..3)];
                let validity = match status {
                    Status::GeometricInfeasible => Validity::GeometricInfeasible,
                    Status::BuildFailed => Validity::BuildFailed,
                    _ => Validity::SimFailed,
                };
                return ResultRow { id: i as u64 * 3 + 1, record: PerformanceRecord::failed(status), validity };
            }
            let mut v = [0.0; 10];
            for x in &mut v {
                *x = if rng.gen_bool(0.5) {
                    rng.gen_range(-12..=12) as f64 * 0.25
                } else {
                    rng.gen_range(-3.0..3.0)
                };
            }
            v[PerformanceField::Mass.index()] = v[PerformanceField::Mass.index()].abs() + 1.0;
            let validity = if rng.gen_bool(0.7) { Validity::Valid } else { Validity::StructuralFailure };
            ResultRow { id: i as u64 * 3 + 1, record: PerformanceRecord::ok(PerformanceValues(v)), validity }
        })
        .collect();
    ResultTable { rows }
}

/// Cost vectors under the default objectives: |dropout vertical|,
/// |transverse|, |twist|, -inplane FoS, mass. Spelled out here rather than
/// taken from the library.
pub fn default_costs(record: &PerformanceRecord) -> Option<[f64; 5]> {
    use PerformanceField::*;
    let v = record.values?;
    Some([
        v.get(InplaneDropoutVerticalDisp).abs(),
        v.get(TransverseBbLateralDisp).abs(),
        v.get(EccentricBbTwist).abs(),
        -v.get(InplaneSafetyFactor),
        v.get(Mass),
    ])
}

/// Default objective values (not orientation-adjusted), for correlation.
pub fn default_values(record: &PerformanceRecord) -> Option<[f64; 5]> {
    default_costs(record).map(|mut c| {
        c[3] = -c[3];
        c
    })
}

pub fn brute_dominates(a: &[f64; 5], b: &[f64; 5]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
}

/// Every Ok row checked against every other Ok row.
pub fn brute_force_front(results: &ResultTable) -> std::collections::BTreeSet<u64> {
    let ok: Vec<(u64, [f64; 5])> =
        results.rows.iter().filter_map(|r| default_costs(&r.record).map(|c| (r.id, c))).collect();
    ok.iter()
        .filter(|(i, a)| !ok.iter().any(|(j, b)| j != i && brute_dominates(b, a)))
        .map(|(i, _)| *i)
        .collect()
}

/// Textbook two-pass Pearson coefficient; `None` for a constant column.
pub fn two_pass_pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 || syy == 0.0 {
        None
    } else {
        Some(sxy / (sxx * syy).sqrt())
    }
}

/// Columns of the default objectives over the Ok rows.
pub fn default_columns(results: &ResultTable) -> Vec<Vec<f64>> {
    let rows: Vec<[f64; 5]> = results.rows.iter().filter_map(|r| default_values(&r.record)).collect();
    (0..5).map(|k| rows.iter().map(|r| r[k]).collect()).collect()
}
