//! Von Mises stress recovery at element ends and the frame safety factor.

use serde::{Deserialize, Serialize};

use super::{BeamModel, EndForces, SolutionField};
use crate::geometry::SectionProperties;

/// Safety factor reported for an unstressed frame; also the ceiling for
/// any computed value.
pub const FOS_CAP: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StressSummary {
    /// Pa
    pub max_von_mises: f64,
    /// Element index and end (0 or 1) where the maximum occurs.
    pub location: (usize, usize),
    pub safety_factor: f64,
}

/// Equivalent stress at the outer fiber: axial plus resultant bending normal
/// stress combined with torsional shear. Transverse shear is ignored.
pub fn von_mises(forces: &EndForces, section: &SectionProperties) -> f64 {
    let ro = section.outer_radius;
    let bending = forces.moment_y.hypot(forces.moment_z);
    let sigma = forces.axial.abs() / section.area + bending * ro / section.i_bend;
    let tau = forces.torsion.abs() * ro / section.j_torsion;
    (sigma * sigma + 3.0 * tau * tau).sqrt()
}

pub fn safety_factor(yield_strength: f64, max_von_mises: f64) -> f64 {
    if max_von_mises > 0.0 {
        (yield_strength / max_von_mises).min(FOS_CAP)
    } else {
        FOS_CAP
    }
}

pub fn compute_stress_summary(model: &BeamModel, field: &SolutionField, yield_strength: f64) -> StressSummary {
    let mut max_von_mises = 0.0;
    let mut location = (0, 0);
    for (index, (element, ends)) in model.elements.iter().zip(&field.element_forces).enumerate() {
        let section = &model.sections[element.section];
        for (end, forces) in ends.iter().enumerate() {
            let sv = von_mises(forces, section);
            if sv > max_von_mises {
                max_von_mises = sv;
                location = (index, end);
            }
        }
    }
    StressSummary { max_von_mises, location, safety_factor: safety_factor(yield_strength, max_von_mises) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fea::{assemble_and_solve, BeamElement, ElasticConstants, FIXED};
    use crate::geometry::{tube_section_properties, Point3};
    use crate::materials::STEEL;

    fn rod(section: SectionProperties) -> BeamModel {
        let mut m = BeamModel::new(vec![Point3::zeros(), Point3::new(0.5, 0.0, 0.0), Point3::new(1.0, 0.0, 0.0)]);
        m.sections.push(section);
        m.materials.push(ElasticConstants { elastic_modulus: STEEL.elastic_modulus, shear_modulus: STEEL.shear_modulus });
        m.elements.push(BeamElement { nodes: [0, 1], section: 0, material: 0, kind: None });
        m.elements.push(BeamElement { nodes: [1, 2], section: 0, material: 0, kind: None });
        m.constrain(0, FIXED);
        m
    }

    #[test]
    fn pure_axial() {
        let section = SectionProperties { area: 1e-4, i_bend: 1e-9, j_torsion: 2e-9, outer_radius: 0.01 };
        let mut m = rod(section);
        m.add_force(2, Point3::new(10e3, 0.0, 0.0));
        let field = assemble_and_solve(&m).unwrap();
        let s = compute_stress_summary(&m, &field, STEEL.yield_strength);
        assert!((s.max_von_mises - 100e6).abs() < 1e-3);
        assert!((s.safety_factor - 4.6).abs() < 1e-9);
    }

    #[test]
    fn pure_torsion_at_shear_yield() {
        let section = tube_section_properties(0.025, 0.002).unwrap();
        let tau = STEEL.yield_strength / 3f64.sqrt();
        let torque = tau * section.j_torsion / section.outer_radius;
        let mut m = rod(section);
        m.add_moment(2, Point3::new(torque, 0.0, 0.0));
        let field = assemble_and_solve(&m).unwrap();
        let s = compute_stress_summary(&m, &field, STEEL.yield_strength);
        assert!((s.safety_factor - 1.0).abs() < 1e-9, "{}", s.safety_factor);
    }

    #[test]
    fn unloaded_frame_is_capped() {
        let m = rod(tube_section_properties(0.025, 0.002).unwrap());
        let field = assemble_and_solve(&m).unwrap();
        let s = compute_stress_summary(&m, &field, STEEL.yield_strength);
        assert_eq!(s.max_von_mises, 0.0);
        assert_eq!(s.safety_factor, FOS_CAP);
    }

    #[test]
    fn bending_uses_resultant_moment() {
        let section = SectionProperties { area: 1.0, i_bend: 1.0, j_torsion: 2.0, outer_radius: 1.0 };
        let f = EndForces { moment_y: 3.0, moment_z: 4.0, ..Default::default() };
        assert!((von_mises(&f, &section) - 5.0).abs() < 1e-15);
    }
}
