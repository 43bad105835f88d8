//! Design generation, thickness resampling, dataset files and batch
//! evaluation.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geometry::FrameParams;
use crate::load_cases::{PerformanceRecord, Validity};
use crate::materials::Material;

mod batch;
mod io;
pub mod sobol;

pub use batch::{run_batch, run_batch_with_jobs};
pub use io::{
    read_designs, read_results, write_designs, write_results, DataError, IngestReport, SchemaError, RESULT_COLUMNS,
};
pub use sobol::{sobol_next, SobolState};

/// Thinnest sampled wall, m.
pub const MIN_THICKNESS: f64 = 0.0005;
/// Thickest sampled wall, m.
pub const MAX_THICKNESS: f64 = 0.010;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("value {0} is outside [0, 1]")]
pub struct DomainError(pub f64);

/// Log-uniform map of `u` onto [0.5 mm, 10 mm].
pub fn scale_thickness(u: f64) -> Result<f64, DomainError> {
    if !(0.0..=1.0).contains(&u) {
        return Err(DomainError(u));
    }
    Ok((MIN_THICKNESS * (MAX_THICKNESS / MIN_THICKNESS).powf(u)).clamp(MIN_THICKNESS, MAX_THICKNESS))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignRow {
    pub id: u64,
    pub params: FrameParams,
}

/// Designs in file order, with unique row ids.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct DesignTable {
    pub rows: Vec<DesignRow>,
}

impl DesignTable {
    /// Rows numbered from 0.
    pub fn from_params(params: impl IntoIterator<Item = FrameParams>) -> Self {
        DesignTable {
            rows: params.into_iter().enumerate().map(|(i, params)| DesignRow { id: i as u64, params }).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub id: u64,
    pub record: PerformanceRecord,
    pub validity: Validity,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Overwrites the seven wall thicknesses of every row with the next scaled
/// Sobol point, one point per row in row order.
pub fn resample_thicknesses(table: &DesignTable, state: &mut SobolState) -> DesignTable {
    let mut out = table.clone();
    for row in &mut out.rows {
        let u = sobol_next(state);
        for (slot, ui) in row.params.thicknesses_mut().into_iter().zip(u) {
            *slot = scale_thickness(ui).expect("sobol points lie in [0, 1)");
        }
    }
    out
}

fn scale(rng: &mut impl Rng, value: &mut f64, lo: f64, hi: f64) {
    *value *= rng.gen_range(lo..hi);
}

/// Draws one geometry around the reference road frame. Thicknesses are left
/// at the reference values.
pub fn perturb_reference(rng: &mut impl Rng) -> FrameParams {
    let mut p = FrameParams::reference_road();

    for v in [&mut p.stack, &mut p.reach, &mut p.seat_tube_length, &mut p.chain_stay_length] {
        scale(rng, v, 0.9, 1.1);
    }
    scale(rng, &mut p.head_tube_length, 0.75, 1.35);
    p.head_tube_angle_deg += rng.gen_range(-2.5..2.5);
    p.seat_tube_angle_deg += rng.gen_range(-2.0..2.0);
    for v in [&mut p.head_tube_upper_offset, &mut p.head_tube_lower_offset, &mut p.seat_stay_junction_offset] {
        scale(rng, v, 0.6, 1.4);
    }
    // Attachment stations closer than a few millimetres make sub-millimetre
    // segments whose bending stiffness swamps the rest of the frame.
    p.seat_tube_top_tube_offset = p.seat_stay_junction_offset + rng.gen_range(0.008..0.035);
    p.bb_drop = rng.gen_range(0.055..0.080);
    p.rear_axle_spacing = [0.130, 0.135, 0.142][rng.gen_range(0..3)];
    p.bb_shell_length = [0.068, 0.073][rng.gen_range(0..2)];
    p.chain_stay_bb_half_spacing = p.bb_shell_length / 2.0;
    if rng.gen_bool(0.5) {
        p.chain_stay_bb_half_spacing -= rng.gen_range(0.003..0.010);
    }
    p.seat_stay_half_spacing = rng.gen_range(0.010..0.022);
    p.chain_stay_bridge_fraction = rng.gen_range(0.15..0.4);
    p.seat_stay_bridge_fraction = rng.gen_range(0.2..0.5);

    for v in [
        &mut p.top_tube_od,
        &mut p.down_tube_od,
        &mut p.seat_tube_od,
        &mut p.head_tube_od,
        &mut p.bb_shell_od,
        &mut p.chain_stay_od,
        &mut p.seat_stay_od,
        &mut p.chain_stay_bridge_od,
        &mut p.seat_stay_bridge_od,
    ] {
        scale(rng, v, 0.8, 1.3);
    }

    let weights = WeightedIndex::new([40, 45, 15]).expect("static weights");
    p.material = Material::ALL[weights.sample(rng)];
    p.has_chain_stay_bridge = rng.gen_bool(0.5);
    p.has_seat_stay_bridge = rng.gen_bool(0.5);
    p
}

/// `count` perturbed reference frames with Sobol-sampled thicknesses. The
/// same seed always yields the same table.
pub fn generate_designs(count: usize, seed: u64) -> DesignTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table = DesignTable::from_params((0..count).map(|_| perturb_reference(&mut rng)));
    resample_thicknesses(&table, &mut SobolState::new())
}
