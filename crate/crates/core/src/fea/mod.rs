//! Linear-elastic space-frame analysis with two-node Euler–Bernoulli beam
//! elements (6 DOF per node: ux, uy, uz, θx, θy, θz).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::geometry::{NodeLabel, Point3, SectionProperties, TubeKind};

pub mod convergence;
pub mod element;
pub mod mesh;
pub mod solver;
pub mod stress;

pub use convergence::{convergence_study, ConvergenceRow};
pub use mesh::{compute_mass, discretize, discretize_with};
pub use solver::{assemble_and_solve, global_stiffness};
pub use stress::{compute_stress_summary, StressSummary, FOS_CAP};

pub const DOF_PER_NODE: usize = 6;

/// Per-node DOF mask; `true` means fixed.
pub type DofMask = [bool; DOF_PER_NODE];

pub const FIXED: DofMask = [true; DOF_PER_NODE];
pub const FREE: DofMask = [false; DOF_PER_NODE];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElasticConstants {
    pub elastic_modulus: f64,
    pub shear_modulus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamElement {
    pub nodes: [usize; 2],
    pub section: usize,
    pub material: usize,
    /// Tube family the element was cut from, if any.
    pub kind: Option<TubeKind>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamModel {
    pub nodes: Vec<Point3>,
    pub elements: Vec<BeamElement>,
    pub sections: Vec<SectionProperties>,
    pub materials: Vec<ElasticConstants>,
    pub constraints: Vec<DofMask>,
    /// Fx, Fy, Fz (N) and Mx, My, Mz (N·m) per node.
    pub loads: Vec<[f64; DOF_PER_NODE]>,
    pub labels: BTreeMap<NodeLabel, usize>,
}

impl BeamModel {
    pub fn new(nodes: Vec<Point3>) -> Self {
        let n = nodes.len();
        BeamModel {
            nodes,
            elements: Vec::new(),
            sections: Vec::new(),
            materials: Vec::new(),
            constraints: vec![FREE; n],
            loads: vec![[0.0; DOF_PER_NODE]; n],
            labels: BTreeMap::new(),
        }
    }

    pub fn dof_count(&self) -> usize {
        self.nodes.len() * DOF_PER_NODE
    }

    /// Adds `mask` to the existing constraints of `node`.
    pub fn constrain(&mut self, node: usize, mask: DofMask) {
        for (c, m) in self.constraints[node].iter_mut().zip(mask) {
            *c |= m;
        }
    }

    pub fn add_force(&mut self, node: usize, force: Point3) {
        for k in 0..3 {
            self.loads[node][k] += force[k];
        }
    }

    pub fn add_moment(&mut self, node: usize, moment: Point3) {
        for k in 0..3 {
            self.loads[node][3 + k] += moment[k];
        }
    }

    pub fn clear_boundary_conditions(&mut self) {
        self.constraints.iter_mut().for_each(|c| *c = FREE);
        self.loads.iter_mut().for_each(|l| *l = [0.0; DOF_PER_NODE]);
    }

    pub fn element_length(&self, e: &BeamElement) -> f64 {
        (self.nodes[e.nodes[1]] - self.nodes[e.nodes[0]]).norm()
    }

    /// Nodes touched by elements of the given tube family.
    pub fn nodes_of_kind(&self, kind: TubeKind) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .elements
            .iter()
            .filter(|e| e.kind == Some(kind))
            .flat_map(|e| e.nodes)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Element end forces in the element's local axes.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EndForces {
    pub axial: f64,
    pub shear_y: f64,
    pub shear_z: f64,
    pub torsion: f64,
    pub moment_y: f64,
    pub moment_z: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField {
    /// ux, uy, uz (m) and θx, θy, θz (rad) per node.
    pub displacements: Vec<[f64; DOF_PER_NODE]>,
    /// Forces at both ends of every element.
    pub element_forces: Vec<[EndForces; 2]>,
    /// Support reactions; zero on free DOFs.
    pub reactions: Vec<[f64; DOF_PER_NODE]>,
}

impl SolutionField {
    pub fn translation(&self, node: usize) -> Point3 {
        let d = &self.displacements[node];
        Point3::new(d[0], d[1], d[2])
    }

    pub fn rotation(&self, node: usize) -> Point3 {
        let d = &self.displacements[node];
        Point3::new(d[3], d[4], d[5])
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FeaError {
    #[error("stiffness matrix is singular (pivot {pivot:e} at equation {equation})")]
    SingularSystem { equation: usize, pivot: f64 },
    #[error("degenerate tube of length {length:e} m")]
    DegenerateTube { length: f64 },
    #[error("invalid section for {0:?}")]
    InvalidSection(TubeKind),
    #[error("elements_per_tube must be at least 1")]
    ZeroSubdivision,
    #[error("invalid model: {0}")]
    InvalidModel(String),
}
