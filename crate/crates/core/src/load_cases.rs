//! The three frame load cases, the ten-value performance record and the
//! validity rule built on its safety factors.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::fea::{self, BeamModel, FeaError, SolutionField, FIXED};
use crate::geometry::{self, FrameParams, NodeLabel, Point3, TubeKind};
use crate::materials::{self, Material, MaterialProperties};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LoadCaseId {
    InPlane,
    Transverse,
    Eccentric,
}

impl LoadCaseId {
    pub const ALL: [LoadCaseId; 3] = [LoadCaseId::InPlane, LoadCaseId::Transverse, LoadCaseId::Eccentric];

    pub fn as_str(self) -> &'static str {
        match self {
            LoadCaseId::InPlane => "inplane",
            LoadCaseId::Transverse => "transverse",
            LoadCaseId::Eccentric => "eccentric",
        }
    }

    /// Quantities measured in this case, in record order.
    pub fn fields(self) -> &'static [PerformanceField] {
        use PerformanceField::*;
        match self {
            LoadCaseId::InPlane => &[
                InplaneBbVerticalDisp,
                InplaneBbLateralDisp,
                InplaneDropoutVerticalDisp,
                InplaneDropoutLateralDisp,
                InplaneSafetyFactor,
            ],
            LoadCaseId::Transverse => &[TransverseBbLateralDisp],
            LoadCaseId::Eccentric => &[EccentricBbVerticalDisp, EccentricBbTwist, EccentricSafetyFactor],
        }
    }
}

impl fmt::Display for LoadCaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LoadCaseId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "inplane" => Ok(LoadCaseId::InPlane),
            "transverse" => Ok(LoadCaseId::Transverse),
            "eccentric" => Ok(LoadCaseId::Eccentric),
            _ => Err(format!("unknown load case `{s}`")),
        }
    }
}

/// One of the ten reported performance values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PerformanceField {
    InplaneBbVerticalDisp,
    InplaneBbLateralDisp,
    InplaneDropoutVerticalDisp,
    InplaneDropoutLateralDisp,
    InplaneSafetyFactor,
    TransverseBbLateralDisp,
    EccentricBbVerticalDisp,
    EccentricBbTwist,
    EccentricSafetyFactor,
    Mass,
}

impl PerformanceField {
    pub const ALL: [PerformanceField; 10] = [
        PerformanceField::InplaneBbVerticalDisp,
        PerformanceField::InplaneBbLateralDisp,
        PerformanceField::InplaneDropoutVerticalDisp,
        PerformanceField::InplaneDropoutLateralDisp,
        PerformanceField::InplaneSafetyFactor,
        PerformanceField::TransverseBbLateralDisp,
        PerformanceField::EccentricBbVerticalDisp,
        PerformanceField::EccentricBbTwist,
        PerformanceField::EccentricSafetyFactor,
        PerformanceField::Mass,
    ];

    pub fn name(self) -> &'static str {
        use PerformanceField::*;
        match self {
            InplaneBbVerticalDisp => "inplane_bb_vertical_disp",
            InplaneBbLateralDisp => "inplane_bb_lateral_disp",
            InplaneDropoutVerticalDisp => "inplane_dropout_vertical_disp",
            InplaneDropoutLateralDisp => "inplane_dropout_lateral_disp",
            InplaneSafetyFactor => "inplane_safety_factor",
            TransverseBbLateralDisp => "transverse_bb_lateral_disp",
            EccentricBbVerticalDisp => "eccentric_bb_vertical_disp",
            EccentricBbTwist => "eccentric_bb_twist",
            EccentricSafetyFactor => "eccentric_safety_factor",
            Mass => "mass",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Displacements and the rotation.
    pub fn is_kinematic(self) -> bool {
        !matches!(
            self,
            PerformanceField::InplaneSafetyFactor | PerformanceField::EccentricSafetyFactor | PerformanceField::Mass
        )
    }
}

impl fmt::Display for PerformanceField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PerformanceField {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PerformanceField::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown performance field `{s}`"))
    }
}

/// The ten values, indexed by [`PerformanceField`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerformanceValues(pub [f64; 10]);

impl PerformanceValues {
    pub fn get(&self, field: PerformanceField) -> f64 {
        self.0[field.index()]
    }

    pub fn set(&mut self, field: PerformanceField, value: f64) {
        self.0[field.index()] = value;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Status {
    Ok,
    GeometricInfeasible,
    BuildFailed,
    SimFailed,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "Ok",
            Status::GeometricInfeasible => "GeometricInfeasible",
            Status::BuildFailed => "BuildFailed",
            Status::SimFailed => "SimFailed",
        }
    }
}

impl FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Status::Ok, Status::GeometricInfeasible, Status::BuildFailed, Status::SimFailed]
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| format!("unknown status `{s}`"))
    }
}

/// Evaluation outcome for one design. `values` is present iff the status
/// is `Ok`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerformanceRecord {
    pub status: Status,
    pub values: Option<PerformanceValues>,
}

impl PerformanceRecord {
    pub fn ok(values: PerformanceValues) -> Self {
        PerformanceRecord { status: Status::Ok, values: Some(values) }
    }

    pub fn failed(status: Status) -> Self {
        debug_assert_ne!(status, Status::Ok);
        PerformanceRecord { status, values: None }
    }

    pub fn get(&self, field: PerformanceField) -> Option<f64> {
        self.values.map(|v| v.get(field))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Validity {
    Valid,
    StructuralFailure,
    GeometricInfeasible,
    BuildFailed,
    SimFailed,
}

impl Validity {
    pub const ALL: [Validity; 5] = [
        Validity::Valid,
        Validity::StructuralFailure,
        Validity::GeometricInfeasible,
        Validity::BuildFailed,
        Validity::SimFailed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Validity::Valid => "Valid",
            Validity::StructuralFailure => "StructuralFailure",
            Validity::GeometricInfeasible => "GeometricInfeasible",
            Validity::BuildFailed => "BuildFailed",
            Validity::SimFailed => "SimFailed",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Validity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Validity::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| format!("unknown validity class `{s}`"))
    }
}

/// Valid iff both safety factors reach the threshold (inclusive).
pub fn classify_validity(record: &PerformanceRecord, fos_threshold: f64) -> Validity {
    match (record.status, record.values) {
        (Status::Ok, Some(v)) => {
            let inplane = v.get(PerformanceField::InplaneSafetyFactor);
            let eccentric = v.get(PerformanceField::EccentricSafetyFactor);
            if inplane >= fos_threshold && eccentric >= fos_threshold {
                Validity::Valid
            } else {
                Validity::StructuralFailure
            }
        }
        (Status::Ok, None) | (Status::SimFailed, _) => Validity::SimFailed,
        (Status::GeometricInfeasible, _) => Validity::GeometricInfeasible,
        (Status::BuildFailed, _) => Validity::BuildFailed,
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(String),
    #[error("config value `{key}` must be positive, got {value}")]
    NonPositive { key: &'static str, value: f64 },
}

/// Simulation settings. Keys in the config file are the serialized field
/// names; every key is optional and the defaults are the standard loads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationConfig {
    pub elements_per_tube: usize,
    pub fos_threshold: f64,
    /// Total upward dropout load, split evenly between both sides.
    #[serde(rename = "inplane_force_N")]
    pub inplane_force_n: f64,
    #[serde(rename = "transverse_force_N")]
    pub transverse_force_n: f64,
    #[serde(rename = "eccentric_force_N")]
    pub eccentric_force_n: f64,
    #[serde(rename = "eccentric_moment_Nm")]
    pub eccentric_moment_nm: f64,
    /// Replaces the tabulated value for every material when set.
    #[serde(rename = "elastic_modulus_Pa", skip_serializing_if = "Option::is_none")]
    pub elastic_modulus_override: Option<f64>,
    #[serde(rename = "shear_modulus_Pa", skip_serializing_if = "Option::is_none")]
    pub shear_modulus_override: Option<f64>,
    #[serde(rename = "density_kg_m3", skip_serializing_if = "Option::is_none")]
    pub density_override: Option<f64>,
    #[serde(rename = "yield_strength_Pa", skip_serializing_if = "Option::is_none")]
    pub yield_strength_override: Option<f64>,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            elements_per_tube: 16,
            fos_threshold: 1.0,
            inplane_force_n: 2000.0,
            transverse_force_n: 500.0,
            eccentric_force_n: 2000.0,
            eccentric_moment_nm: 140.0,
            elastic_modulus_override: None,
            shear_modulus_override: None,
            density_override: None,
            yield_strength_override: None,
        }
    }
}

impl SimulationConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let config: SimulationConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.elements_per_tube == 0 {
            return Err(ConfigError::NonPositive { key: "elements_per_tube", value: 0.0 });
        }
        let mut checks = vec![
            ("fos_threshold", self.fos_threshold),
            ("inplane_force_N", self.inplane_force_n),
            ("transverse_force_N", self.transverse_force_n),
            ("eccentric_force_N", self.eccentric_force_n),
            ("eccentric_moment_Nm", self.eccentric_moment_nm),
        ];
        let overrides = [
            ("elastic_modulus_Pa", self.elastic_modulus_override),
            ("shear_modulus_Pa", self.shear_modulus_override),
            ("density_kg_m3", self.density_override),
            ("yield_strength_Pa", self.yield_strength_override),
        ];
        checks.extend(overrides.iter().filter_map(|(k, v)| v.map(|v| (*k, v))));
        for (key, value) in checks {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ConfigError::NonPositive { key, value });
            }
        }
        Ok(())
    }

    /// Tabulated properties with any overrides applied.
    pub fn material_properties(&self, material: Material) -> MaterialProperties {
        let mut props = materials::lookup(material);
        if let Some(e) = self.elastic_modulus_override {
            props.elastic_modulus = e;
        }
        if let Some(g) = self.shear_modulus_override {
            props.shear_modulus = g;
        }
        if let Some(rho) = self.density_override {
            props.density = rho;
        }
        if let Some(y) = self.yield_strength_override {
            props.yield_strength = y;
        }
        props
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LoadCaseError {
    #[error("model has no node labeled {0:?}")]
    MissingLabel(NodeLabel),
}

fn label(model: &BeamModel, label: NodeLabel) -> Result<usize, LoadCaseError> {
    model.labels.get(&label).copied().ok_or(LoadCaseError::MissingLabel(label))
}

/// Returns a copy of `model` carrying the supports and loads of `case`.
/// Existing boundary conditions are discarded.
pub fn apply_load_case(
    model: &BeamModel,
    case: LoadCaseId,
    config: &SimulationConfig,
) -> Result<BeamModel, LoadCaseError> {
    let bb = label(model, NodeLabel::BbCenter)?;
    let dropouts = [label(model, NodeLabel::DropoutLeft)?, label(model, NodeLabel::DropoutRight)?];
    let head_tube = model.nodes_of_kind(TubeKind::HeadTube);
    if head_tube.is_empty() {
        return Err(LoadCaseError::MissingLabel(NodeLabel::HeadTubeTop));
    }

    let mut out = model.clone();
    out.clear_boundary_conditions();
    for &n in &head_tube {
        out.constrain(n, FIXED);
    }

    match case {
        LoadCaseId::InPlane => {
            let share = config.inplane_force_n / 2.0;
            for &d in &dropouts {
                out.add_force(d, Point3::new(0.0, share, 0.0));
            }
            out.add_force(bb, Point3::new(0.0, -config.inplane_force_n, 0.0));
        }
        LoadCaseId::Transverse => {
            for &d in &dropouts {
                out.constrain(d, [false, false, true, false, false, false]);
            }
            out.add_force(bb, Point3::new(0.0, 0.0, config.transverse_force_n));
        }
        LoadCaseId::Eccentric => {
            for &d in &dropouts {
                out.constrain(d, [false, true, true, false, false, false]);
            }
            out.add_force(bb, Point3::new(0.0, -config.eccentric_force_n, 0.0));
            out.add_moment(bb, Point3::new(config.eccentric_moment_nm, 0.0, 0.0));
        }
    }
    Ok(out)
}

/// Quantities recorded for one load case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseMeasurements {
    pub case: LoadCaseId,
    pub values: Vec<(PerformanceField, f64)>,
}

impl CaseMeasurements {
    pub fn get(&self, field: PerformanceField) -> Option<f64> {
        self.values.iter().find(|(f, _)| *f == field).map(|(_, v)| *v)
    }
}

/// Why a case could not be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum CaseFailure {
    Load(LoadCaseError),
    Fea(FeaError),
}

impl CaseFailure {
    pub fn status(&self) -> Status {
        match self {
            CaseFailure::Load(_) => Status::BuildFailed,
            CaseFailure::Fea(FeaError::SingularSystem { .. }) | CaseFailure::Fea(FeaError::InvalidModel(_)) => {
                Status::SimFailed
            }
            CaseFailure::Fea(_) => Status::BuildFailed,
        }
    }
}

fn extract(case: LoadCaseId, model: &BeamModel, field: &SolutionField, yield_strength: f64) -> CaseMeasurements {
    use PerformanceField::*;
    let bb = model.labels[&NodeLabel::BbCenter];
    let left = model.labels[&NodeLabel::DropoutLeft];
    let right = model.labels[&NodeLabel::DropoutRight];
    let u_bb = field.translation(bb);
    let u_drop = (field.translation(left) + field.translation(right)) / 2.0;

    let values = match case {
        LoadCaseId::InPlane => vec![
            (InplaneBbVerticalDisp, u_bb.y),
            (InplaneBbLateralDisp, u_bb.z),
            (InplaneDropoutVerticalDisp, u_drop.y),
            (InplaneDropoutLateralDisp, u_drop.z),
            (
                InplaneSafetyFactor,
                fea::compute_stress_summary(model, field, yield_strength).safety_factor,
            ),
        ],
        LoadCaseId::Transverse => vec![(TransverseBbLateralDisp, u_bb.z)],
        LoadCaseId::Eccentric => vec![
            (EccentricBbVerticalDisp, u_bb.y),
            (EccentricBbTwist, field.rotation(bb).x),
            (
                EccentricSafetyFactor,
                fea::compute_stress_summary(model, field, yield_strength).safety_factor,
            ),
        ],
    };
    CaseMeasurements { case, values }
}

/// Applies `case` to a discretized frame, solves it and extracts the case's
/// measurements.
pub fn run_case(
    model: &BeamModel,
    case: LoadCaseId,
    config: &SimulationConfig,
    yield_strength: f64,
) -> Result<CaseMeasurements, CaseFailure> {
    let loaded = apply_load_case(model, case, config).map_err(CaseFailure::Load)?;
    let field = fea::assemble_and_solve(&loaded).map_err(CaseFailure::Fea)?;
    let m = extract(case, &loaded, &field, yield_strength);
    if m.values.iter().any(|(_, v)| !v.is_finite()) {
        return Err(CaseFailure::Fea(FeaError::SingularSystem { equation: 0, pivot: f64::NAN }));
    }
    Ok(m)
}

/// Full pipeline for one design. Failures become the status of the first
/// stage that failed.
pub fn evaluate_frame(params: &FrameParams, config: &SimulationConfig) -> PerformanceRecord {
    if !geometry::check_feasibility(params).feasible {
        return PerformanceRecord::failed(Status::GeometricInfeasible);
    }
    let Ok(skeleton) = geometry::build_skeleton(params) else {
        return PerformanceRecord::failed(Status::BuildFailed);
    };
    let material = config.material_properties(params.material);
    let model = match fea::discretize_with(&skeleton, params, config.elements_per_tube, &material) {
        Ok(m) => m,
        Err(FeaError::ZeroSubdivision) => return PerformanceRecord::failed(Status::SimFailed),
        Err(_) => return PerformanceRecord::failed(Status::BuildFailed),
    };

    let mut values = PerformanceValues([f64::NAN; 10]);
    for case in LoadCaseId::ALL {
        match run_case(&model, case, config, material.yield_strength) {
            Ok(m) => {
                for (field, v) in m.values {
                    values.set(field, v);
                }
            }
            Err(failure) => return PerformanceRecord::failed(failure.status()),
        }
    }
    let mass = fea::compute_mass(&skeleton, params, material.density);
    if !mass.is_finite() {
        return PerformanceRecord::failed(Status::SimFailed);
    }
    values.set(PerformanceField::Mass, mass);
    PerformanceRecord::ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_skeleton;

    fn reference_model() -> BeamModel {
        let p = FrameParams::reference_road();
        fea::discretize(&build_skeleton(&p).unwrap(), &p, 4).unwrap()
    }

    fn total_load(m: &BeamModel) -> [f64; 6] {
        let mut t = [0.0; 6];
        for l in &m.loads {
            for k in 0..6 {
                t[k] += l[k];
            }
        }
        t
    }

    #[test]
    fn defaults_match_standard_loads() {
        let c = SimulationConfig::default();
        assert_eq!(c.elements_per_tube, 16);
        assert_eq!(c.fos_threshold, 1.0);
        assert_eq!(c.inplane_force_n, 2000.0);
        assert_eq!(c.transverse_force_n, 500.0);
        assert_eq!(c.eccentric_force_n, 2000.0);
        assert_eq!(c.eccentric_moment_nm, 140.0);
        assert_eq!(SimulationConfig::from_toml_str("").unwrap(), c);
    }

    #[test]
    fn eccentric_moment_is_force_times_offset() {
        let c = SimulationConfig::default();
        assert!((c.eccentric_moment_nm - c.eccentric_force_n * 0.07).abs() < 1e-9);
    }

    #[test]
    fn config_parsing() {
        let c = SimulationConfig::from_toml_str("elements_per_tube = 8\ninplane_force_N = 1000.0\n").unwrap();
        assert_eq!(c.elements_per_tube, 8);
        assert_eq!(c.inplane_force_n, 1000.0);
        assert!(matches!(SimulationConfig::from_toml_str("bogus = 1"), Err(ConfigError::Parse(_))));
        assert!(matches!(
            SimulationConfig::from_toml_str("transverse_force_N = -5.0"),
            Err(ConfigError::NonPositive { key: "transverse_force_N", .. })
        ));
    }

    #[test]
    fn inplane_net_vertical_load_is_zero() {
        let m = apply_load_case(&reference_model(), LoadCaseId::InPlane, &SimulationConfig::default()).unwrap();
        let t = total_load(&m);
        assert_eq!(t[1], 0.0);
        let dl = m.labels[&NodeLabel::DropoutLeft];
        assert_eq!(m.loads[dl][1], 1000.0);
    }

    #[test]
    fn transverse_single_lateral_load() {
        let m = apply_load_case(&reference_model(), LoadCaseId::Transverse, &SimulationConfig::default()).unwrap();
        let loaded: Vec<_> = m.loads.iter().enumerate().filter(|(_, l)| l.iter().any(|&v| v != 0.0)).collect();
        assert_eq!(loaded.len(), 1);
        assert_eq!(loaded[0].0, m.labels[&NodeLabel::BbCenter]);
        assert_eq!(loaded[0].1, &[0.0, 0.0, 500.0, 0.0, 0.0, 0.0]);
        let dr = m.labels[&NodeLabel::DropoutRight];
        assert_eq!(m.constraints[dr], [false, false, true, false, false, false]);
    }

    #[test]
    fn head_tube_fully_fixed_in_every_case() {
        let base = reference_model();
        for case in LoadCaseId::ALL {
            let m = apply_load_case(&base, case, &SimulationConfig::default()).unwrap();
            for n in m.nodes_of_kind(TubeKind::HeadTube) {
                assert_eq!(m.constraints[n], FIXED);
            }
        }
    }

    #[test]
    fn missing_label() {
        let mut m = reference_model();
        m.labels.remove(&NodeLabel::DropoutLeft);
        assert_eq!(
            apply_load_case(&m, LoadCaseId::InPlane, &SimulationConfig::default()),
            Err(LoadCaseError::MissingLabel(NodeLabel::DropoutLeft))
        );
    }

    #[test]
    fn infeasible_params_status() {
        let mut p = FrameParams::reference_road();
        p.top_tube_t = -0.001;
        let r = evaluate_frame(&p, &SimulationConfig::default());
        assert_eq!(r.status, Status::GeometricInfeasible);
        assert!(r.values.is_none());
    }

    #[test]
    fn build_failure_status() {
        let mut p = FrameParams::reference_road();
        p.seat_stay_half_spacing = 5e-7;
        assert_eq!(evaluate_frame(&p, &SimulationConfig::default()).status, Status::BuildFailed);
    }

    #[test]
    fn reference_frame_evaluates() {
        let r = evaluate_frame(&FrameParams::reference_road(), &SimulationConfig::default());
        assert_eq!(r.status, Status::Ok);
        let v = r.values.unwrap();
        assert!(v.0.iter().all(|x| x.is_finite()));
        // Dropouts lift further than the BB.
        assert!(v.get(PerformanceField::InplaneDropoutVerticalDisp) > v.get(PerformanceField::InplaneBbVerticalDisp));
        assert!(v.get(PerformanceField::TransverseBbLateralDisp) > 0.0);
        assert!(v.get(PerformanceField::Mass) > 1.0 && v.get(PerformanceField::Mass) < 3.0);
    }

    #[test]
    fn validity_rule() {
        let mut v = PerformanceValues([0.0; 10]);
        v.set(PerformanceField::InplaneSafetyFactor, 1.2);
        v.set(PerformanceField::EccentricSafetyFactor, 0.9);
        assert_eq!(classify_validity(&PerformanceRecord::ok(v), 1.0), Validity::StructuralFailure);
        v.set(PerformanceField::InplaneSafetyFactor, 1.0);
        v.set(PerformanceField::EccentricSafetyFactor, 1.0);
        assert_eq!(classify_validity(&PerformanceRecord::ok(v), 1.0), Validity::Valid);
        assert_eq!(
            classify_validity(&PerformanceRecord::failed(Status::BuildFailed), 1.0),
            Validity::BuildFailed
        );
    }

    #[test]
    fn names_round_trip() {
        for f in PerformanceField::ALL {
            assert_eq!(f.name().parse::<PerformanceField>().unwrap(), f);
        }
        for v in Validity::ALL {
            assert_eq!(v.as_str().parse::<Validity>().unwrap(), v);
        }
        assert_eq!("in-plane".parse::<LoadCaseId>().unwrap(), LoadCaseId::InPlane);
    }
}
