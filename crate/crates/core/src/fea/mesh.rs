//! Skeleton subdivision into beam elements, and frame mass.

use std::f64::consts::PI;

use super::{BeamElement, BeamModel, ElasticConstants, FeaError};
use crate::geometry::{tube_section_properties, FrameParams, FrameSkeleton, TubeKind, MIN_TUBE_LENGTH};
use crate::materials::{self, MaterialProperties};

/// Splits every skeleton tube into `elements_per_tube` equal elements using
/// the tabulated properties of the frame material.
pub fn discretize(
    skeleton: &FrameSkeleton,
    params: &FrameParams,
    elements_per_tube: usize,
) -> Result<BeamModel, FeaError> {
    discretize_with(skeleton, params, elements_per_tube, &materials::lookup(params.material))
}

/// As [`discretize`], with explicit material properties.
///
/// Skeleton nodes keep their indices; interior nodes follow, tube by tube.
pub fn discretize_with(
    skeleton: &FrameSkeleton,
    params: &FrameParams,
    elements_per_tube: usize,
    material: &MaterialProperties,
) -> Result<BeamModel, FeaError> {
    if elements_per_tube == 0 {
        return Err(FeaError::ZeroSubdivision);
    }

    let mut model = BeamModel::new(skeleton.nodes.iter().map(|n| n.position).collect());
    for (index, node) in skeleton.nodes.iter().enumerate() {
        for &label in &node.labels {
            model.labels.insert(label, index);
        }
    }
    model.materials.push(ElasticConstants {
        elastic_modulus: material.elastic_modulus,
        shear_modulus: material.shear_modulus,
    });

    let mut section_of = [None; TubeKind::ALL.len()];
    for tube in &skeleton.tubes {
        let slot = &mut section_of[tube.kind.index()];
        if slot.is_none() {
            let (od, t) = params.tube_dimensions(tube.kind);
            let props = tube_section_properties(od, t).map_err(|_| FeaError::InvalidSection(tube.kind))?;
            model.sections.push(props);
            *slot = Some(model.sections.len() - 1);
        }
    }

    for tube in &skeleton.tubes {
        let length = skeleton.tube_length(tube);
        if !(length >= MIN_TUBE_LENGTH) {
            return Err(FeaError::DegenerateTube { length });
        }
        let section = section_of[tube.kind.index()].expect("section registered above");
        let a = skeleton.nodes[tube.start].position;
        let b = skeleton.nodes[tube.end].position;

        let mut prev = tube.start;
        for i in 1..=elements_per_tube {
            let next = if i == elements_per_tube {
                tube.end
            } else {
                let s = i as f64 / elements_per_tube as f64;
                model.nodes.push(a + s * (b - a));
                model.constraints.push(super::FREE);
                model.loads.push([0.0; 6]);
                model.nodes.len() - 1
            };
            model.elements.push(BeamElement { nodes: [prev, next], section, material: 0, kind: Some(tube.kind) });
            prev = next;
        }
    }
    Ok(model)
}

/// Σ ρ·A·L over all skeleton tubes. Junction overlap is not deducted.
pub fn compute_mass(skeleton: &FrameSkeleton, params: &FrameParams, density: f64) -> f64 {
    skeleton
        .tubes
        .iter()
        .map(|tube| {
            let (od, t) = params.tube_dimensions(tube.kind);
            let ro = od / 2.0;
            let ri = ro - t;
            density * PI * (ro * ro - ri * ri) * skeleton.tube_length(tube)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_skeleton, NodeLabel, Point3, SkeletonNode, Tube};
    use crate::materials::{ALUMINUM, STEEL};

    fn single_tube(length: f64) -> (FrameSkeleton, FrameParams) {
        let mut p = FrameParams::reference_road();
        p.top_tube_od = 0.025;
        p.top_tube_t = 0.002;
        let sk = FrameSkeleton {
            nodes: vec![
                SkeletonNode { position: Point3::zeros(), labels: vec![NodeLabel::BbCenter] },
                SkeletonNode { position: Point3::new(length, 0.0, 0.0), labels: vec![] },
            ],
            tubes: vec![Tube { start: 0, end: 1, kind: TubeKind::TopTube }],
        };
        (sk, p)
    }

    #[test]
    fn one_element_per_tube() {
        let p = FrameParams::reference_road();
        let sk = build_skeleton(&p).unwrap();
        let m = discretize(&sk, &p, 1).unwrap();
        assert_eq!(m.elements.len(), sk.tubes.len());
        assert_eq!(m.nodes.len(), sk.nodes.len());
    }

    #[test]
    fn sixteen_elements_counting() {
        let p = FrameParams::reference_road();
        let sk = build_skeleton(&p).unwrap();
        let m = discretize(&sk, &p, 16).unwrap();
        assert_eq!(m.elements.len(), sk.tubes.len() * 16);
        assert_eq!(m.nodes.len(), sk.nodes.len() + sk.tubes.len() * 15);
        assert_eq!(m.labels[&NodeLabel::BbCenter], sk.node(NodeLabel::BbCenter).unwrap());
    }

    #[test]
    fn element_lengths_partition_tubes() {
        let p = FrameParams::reference_road();
        let sk = build_skeleton(&p).unwrap();
        for n in [1, 2, 5] {
            let m = discretize(&sk, &p, n).unwrap();
            let total: f64 = m.elements.iter().map(|e| m.element_length(e)).sum();
            let expected: f64 = sk.tubes.iter().map(|t| sk.tube_length(t)).sum();
            assert!((total - expected).abs() < 1e-12 * expected);
        }
    }

    #[test]
    fn zero_subdivision_rejected() {
        let p = FrameParams::reference_road();
        let sk = build_skeleton(&p).unwrap();
        assert_eq!(discretize(&sk, &p, 0), Err(FeaError::ZeroSubdivision));
    }

    #[test]
    fn degenerate_tube_rejected() {
        let (sk, p) = single_tube(5e-7);
        assert!(matches!(discretize(&sk, &p, 4), Err(FeaError::DegenerateTube { .. })));
    }

    #[test]
    fn hollow_cylinder_mass() {
        let (sk, p) = single_tube(0.5);
        let m = compute_mass(&sk, &p, STEEL.density);
        let oracle = STEEL.density * PI * (0.0125f64.powi(2) - 0.0105f64.powi(2)) * 0.5;
        assert!((m - oracle).abs() < 1e-12);
        assert!((m - 0.5672).abs() < 1e-3);
        let ratio = compute_mass(&sk, &p, ALUMINUM.density) / m;
        assert!((ratio - 2700.0 / 7850.0).abs() < 1e-15);
    }

    #[test]
    fn bridge_mass_is_additive() {
        let mut bare = FrameParams::reference_road();
        bare.has_chain_stay_bridge = false;
        bare.has_seat_stay_bridge = false;
        let mut bridged = bare.clone();
        bridged.has_chain_stay_bridge = true;
        bridged.has_seat_stay_bridge = true;

        let rho = STEEL.density;
        let m0 = compute_mass(&build_skeleton(&bare).unwrap(), &bare, rho);
        let sk = build_skeleton(&bridged).unwrap();
        let m1 = compute_mass(&sk, &bridged, rho);

        let bridge_mass: f64 = [
            (NodeLabel::ChainStayBridgeLeft, NodeLabel::ChainStayBridgeRight, TubeKind::ChainStayBridge),
            (NodeLabel::SeatStayBridgeLeft, NodeLabel::SeatStayBridgeRight, TubeKind::SeatStayBridge),
        ]
        .iter()
        .map(|&(l, r, kind)| {
            let len = (sk.position(l).unwrap() - sk.position(r).unwrap()).norm();
            let (od, t) = bridged.tube_dimensions(kind);
            rho * PI * ((od / 2.0).powi(2) - (od / 2.0 - t).powi(2)) * len
        })
        .sum();
        assert!((m1 - m0 - bridge_mass).abs() < 1e-12);
    }
}
