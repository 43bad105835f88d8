//! Sweep over beam subdivision levels for one load case.

use serde::Serialize;

use crate::geometry::{self, FrameParams};
use crate::load_cases::{self, CaseMeasurements, LoadCaseId, SimulationConfig, Status};

use super::{compute_mass, discretize_with};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub elements_per_tube: usize,
    /// The case's measured quantities, or the failure status of this level.
    pub outcome: Result<CaseMeasurements, Status>,
    pub mass: Option<f64>,
}

/// Runs `case` at every subdivision level. A failing level is recorded and
/// the sweep continues.
pub fn convergence_study(
    params: &FrameParams,
    case: LoadCaseId,
    subdivisions: &[usize],
    config: &SimulationConfig,
) -> Vec<ConvergenceRow> {
    let skeleton = if geometry::check_feasibility(params).feasible {
        geometry::build_skeleton(params).map_err(|_| Status::BuildFailed)
    } else {
        Err(Status::GeometricInfeasible)
    };
    let material = config.material_properties(params.material);

    subdivisions
        .iter()
        .map(|&n| {
            let (outcome, mass) = match &skeleton {
                Err(status) => (Err(*status), None),
                Ok(sk) => {
                    let mass = Some(compute_mass(sk, params, material.density));
                    let outcome = match discretize_with(sk, params, n, &material) {
                        Ok(model) => load_cases::run_case(&model, case, config, material.yield_strength)
                            .map_err(|f| f.status()),
                        Err(super::FeaError::ZeroSubdivision) => Err(Status::SimFailed),
                        Err(_) => Err(Status::BuildFailed),
                    };
                    (outcome, mass)
                }
            };
            ConvergenceRow { elements_per_tube: n, outcome, mass }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_level_table() {
        let rows = convergence_study(
            &FrameParams::reference_road(),
            LoadCaseId::Transverse,
            &[4],
            &SimulationConfig::default(),
        );
        assert_eq!(rows.len(), 1);
        assert!(rows[0].outcome.is_ok());
    }

    #[test]
    fn failures_do_not_abort() {
        let rows = convergence_study(
            &FrameParams::reference_road(),
            LoadCaseId::InPlane,
            &[0, 2],
            &SimulationConfig::default(),
        );
        assert_eq!(rows[0].outcome, Err(Status::SimFailed));
        assert!(rows[1].outcome.is_ok());
    }

    #[test]
    fn deterministic() {
        let p = FrameParams::reference_road();
        let c = SimulationConfig::default();
        let a = convergence_study(&p, LoadCaseId::Eccentric, &[1, 2, 4], &c);
        let b = convergence_study(&p, LoadCaseId::Eccentric, &[1, 2, 4], &c);
        assert_eq!(a, b);
    }
}
