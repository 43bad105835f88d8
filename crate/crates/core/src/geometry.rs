//! The 37-value frame design vector, the diamond-frame skeleton built from it,
//! and the geometric feasibility checks.
//!
//! Coordinates: x points forward toward the head tube, y up, z lateral to the
//! right. The bottom-bracket center is the origin. Lengths are meters; angles
//! are degrees in [`FrameParams`] and radians everywhere else.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::materials::Material;

pub type Point3 = Vector3<f64>;

/// Tubes shorter than this are degenerate.
pub const MIN_TUBE_LENGTH: f64 = 1e-6;

/// Attachment points closer than this are the same junction node.
const MERGE_TOLERANCE: f64 = 1e-9;

macro_rules! frame_params {
    (
        geometry: [$($g:ident),* $(,)?],
        diameters: [$($d:ident),* $(,)?],
        thicknesses: [$($t:ident),* $(,)?] $(,)?
    ) => {
        /// A frame design: 18 geometry relations, 9 outer diameters,
        /// 7 wall thicknesses, one material and two bridge flags.
        #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
        pub struct FrameParams {
            $(pub $g: f64,)*
            $(pub $d: f64,)*
            $(pub $t: f64,)*
            pub material: Material,
            pub has_chain_stay_bridge: bool,
            pub has_seat_stay_bridge: bool,
        }

        pub const GEOMETRY_FIELDS: [&str; 18] = [$(stringify!($g)),*];
        pub const DIAMETER_FIELDS: [&str; 9] = [$(stringify!($d)),*];
        pub const THICKNESS_FIELDS: [&str; 7] = [$(stringify!($t)),*];

        impl FrameParams {
            /// Continuous values in canonical column order (geometry,
            /// diameters, thicknesses).
            pub fn continuous_values(&self) -> [f64; 34] {
                [$(self.$g,)* $(self.$d,)* $(self.$t,)*]
            }

            pub fn continuous_values_mut(&mut self) -> [&mut f64; 34] {
                [$(&mut self.$g,)* $(&mut self.$d,)* $(&mut self.$t,)*]
            }

            pub fn thicknesses(&self) -> [f64; 7] {
                [$(self.$t),*]
            }

            pub fn thicknesses_mut(&mut self) -> [&mut f64; 7] {
                [$(&mut self.$t),*]
            }
        }
    };
}

frame_params! {
    geometry: [
        stack,
        reach,
        head_tube_angle_deg,
        head_tube_length,
        seat_tube_angle_deg,
        seat_tube_length,
        seat_tube_top_tube_offset,
        head_tube_upper_offset,
        head_tube_lower_offset,
        chain_stay_length,
        bb_drop,
        rear_axle_spacing,
        chain_stay_bb_half_spacing,
        seat_stay_junction_offset,
        seat_stay_half_spacing,
        bb_shell_length,
        chain_stay_bridge_fraction,
        seat_stay_bridge_fraction,
    ],
    diameters: [
        top_tube_od,
        down_tube_od,
        seat_tube_od,
        head_tube_od,
        bb_shell_od,
        chain_stay_od,
        seat_stay_od,
        chain_stay_bridge_od,
        seat_stay_bridge_od,
    ],
    thicknesses: [
        top_tube_t,
        down_tube_t,
        seat_tube_t,
        head_tube_t,
        bb_shell_t,
        chain_stay_t,
        seat_stay_t,
    ],
}

pub const MATERIAL_FIELD: &str = "material";
pub const CHAIN_STAY_BRIDGE_FLAG: &str = "has_chain_stay_bridge";
pub const SEAT_STAY_BRIDGE_FLAG: &str = "has_seat_stay_bridge";

/// All 37 parameter column names in canonical order.
pub fn parameter_columns() -> Vec<&'static str> {
    GEOMETRY_FIELDS
        .iter()
        .chain(DIAMETER_FIELDS.iter())
        .chain(THICKNESS_FIELDS.iter())
        .copied()
        .chain([MATERIAL_FIELD, CHAIN_STAY_BRIDGE_FLAG, SEAT_STAY_BRIDGE_FLAG])
        .collect()
}

impl FrameParams {
    /// A conventional steel road frame (roughly a 56 cm size). Used as the
    /// canonical fixture and as the center of the generated design
    /// distribution.
    pub fn reference_road() -> Self {
        FrameParams {
            stack: 0.565,
            reach: 0.385,
            head_tube_angle_deg: 73.0,
            head_tube_length: 0.150,
            seat_tube_angle_deg: 73.5,
            seat_tube_length: 0.540,
            seat_tube_top_tube_offset: 0.060,
            head_tube_upper_offset: 0.015,
            head_tube_lower_offset: 0.020,
            chain_stay_length: 0.410,
            bb_drop: 0.070,
            rear_axle_spacing: 0.130,
            chain_stay_bb_half_spacing: 0.034,
            seat_stay_junction_offset: 0.040,
            seat_stay_half_spacing: 0.020,
            bb_shell_length: 0.068,
            chain_stay_bridge_fraction: 0.25,
            seat_stay_bridge_fraction: 0.35,
            top_tube_od: 0.0286,
            down_tube_od: 0.0318,
            seat_tube_od: 0.0286,
            head_tube_od: 0.0364,
            bb_shell_od: 0.040,
            chain_stay_od: 0.022,
            seat_stay_od: 0.016,
            chain_stay_bridge_od: 0.016,
            seat_stay_bridge_od: 0.012,
            top_tube_t: 0.0009,
            down_tube_t: 0.0009,
            seat_tube_t: 0.0009,
            head_tube_t: 0.0015,
            bb_shell_t: 0.0025,
            chain_stay_t: 0.0009,
            seat_stay_t: 0.0008,
            material: Material::Steel,
            has_chain_stay_bridge: false,
            has_seat_stay_bridge: true,
        }
    }

    /// Outer diameter and wall thickness for the tubes of `kind`. Bridges use
    /// the wall thickness of their parent stays.
    pub fn tube_dimensions(&self, kind: TubeKind) -> (f64, f64) {
        match kind {
            TubeKind::TopTube => (self.top_tube_od, self.top_tube_t),
            TubeKind::DownTube => (self.down_tube_od, self.down_tube_t),
            TubeKind::SeatTube => (self.seat_tube_od, self.seat_tube_t),
            TubeKind::HeadTube => (self.head_tube_od, self.head_tube_t),
            TubeKind::BbShell => (self.bb_shell_od, self.bb_shell_t),
            TubeKind::ChainStay => (self.chain_stay_od, self.chain_stay_t),
            TubeKind::SeatStay => (self.seat_stay_od, self.seat_stay_t),
            TubeKind::ChainStayBridge => (self.chain_stay_bridge_od, self.chain_stay_t),
            TubeKind::SeatStayBridge => (self.seat_stay_bridge_od, self.seat_stay_t),
        }
    }
}

/// Tube families; each family has one cross section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TubeKind {
    TopTube,
    DownTube,
    SeatTube,
    HeadTube,
    BbShell,
    ChainStay,
    SeatStay,
    ChainStayBridge,
    SeatStayBridge,
}

impl TubeKind {
    pub const ALL: [TubeKind; 9] = [
        TubeKind::TopTube,
        TubeKind::DownTube,
        TubeKind::SeatTube,
        TubeKind::HeadTube,
        TubeKind::BbShell,
        TubeKind::ChainStay,
        TubeKind::SeatStay,
        TubeKind::ChainStayBridge,
        TubeKind::SeatStayBridge,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NodeLabel {
    BbCenter,
    BbShellLeft,
    BbShellRight,
    HeadTubeTop,
    HeadTubeBottom,
    TopTubeHeadJunction,
    DownTubeHeadJunction,
    SeatTubeTop,
    TopTubeSeatJunction,
    SeatStayJunctionCenter,
    SeatStayJunctionLeft,
    SeatStayJunctionRight,
    DropoutLeft,
    DropoutRight,
    ChainStayRootLeft,
    ChainStayRootRight,
    ChainStayBridgeLeft,
    ChainStayBridgeRight,
    SeatStayBridgeLeft,
    SeatStayBridgeRight,
}

/// A junction point. Coincident attachment points share one node, which then
/// carries several labels.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonNode {
    pub position: Point3,
    pub labels: Vec<NodeLabel>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tube {
    pub start: usize,
    pub end: usize,
    pub kind: TubeKind,
}

/// Straight constant-section tube segments between junction nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSkeleton {
    pub nodes: Vec<SkeletonNode>,
    pub tubes: Vec<Tube>,
}

impl FrameSkeleton {
    pub fn node(&self, label: NodeLabel) -> Option<usize> {
        self.nodes.iter().position(|n| n.labels.contains(&label))
    }

    pub fn position(&self, label: NodeLabel) -> Option<Point3> {
        self.node(label).map(|i| self.nodes[i].position)
    }

    pub fn tube_length(&self, tube: &Tube) -> f64 {
        (self.nodes[tube.end].position - self.nodes[tube.start].position).norm()
    }

    pub fn tube_kinds(&self) -> std::collections::BTreeSet<TubeKind> {
        self.tubes.iter().map(|t| t.kind).collect()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("frame failed to build: {0}")]
    BuildFailure(String),
    #[error("tube section out of domain: od = {od}, t = {t}")]
    Domain { od: f64, t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ViolationCode {
    NonPositiveDimension,
    AngleOutOfRange,
    StayIntersectionFailure,
    ThicknessExceedsRadius,
    DegenerateTube,
    BuildFailure,
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: ViolationCode,
    /// Parameter or member the violation refers to.
    pub subject: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        FeasibilityReport { feasible: violations.is_empty(), violations }
    }

    pub fn has(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }
}

/// Runs every check and returns all violations found.
pub fn check_feasibility(params: &FrameParams) -> FeasibilityReport {
    let mut out = Vec::new();
    let mut push = |code, subject| out.push(Violation { code, subject });

    let p = params;
    let strictly_positive: [(&'static str, f64); 16] = [
        ("stack", p.stack),
        ("reach", p.reach),
        ("head_tube_length", p.head_tube_length),
        ("seat_tube_length", p.seat_tube_length),
        ("chain_stay_length", p.chain_stay_length),
        ("rear_axle_spacing", p.rear_axle_spacing),
        ("chain_stay_bb_half_spacing", p.chain_stay_bb_half_spacing),
        ("seat_stay_half_spacing", p.seat_stay_half_spacing),
        ("bb_shell_length", p.bb_shell_length),
        ("top_tube_od", p.top_tube_od),
        ("down_tube_od", p.down_tube_od),
        ("seat_tube_od", p.seat_tube_od),
        ("head_tube_od", p.head_tube_od),
        ("bb_shell_od", p.bb_shell_od),
        ("chain_stay_od", p.chain_stay_od),
        ("seat_stay_od", p.seat_stay_od),
    ];
    for (name, v) in strictly_positive {
        if !(v > 0.0 && v.is_finite()) {
            push(ViolationCode::NonPositiveDimension, name);
        }
    }
    for (name, v) in THICKNESS_FIELDS.iter().zip(p.thicknesses()) {
        if !(v > 0.0 && v.is_finite()) {
            push(ViolationCode::NonPositiveDimension, name);
        }
    }
    let non_negative: [(&'static str, f64); 4] = [
        ("seat_tube_top_tube_offset", p.seat_tube_top_tube_offset),
        ("head_tube_upper_offset", p.head_tube_upper_offset),
        ("head_tube_lower_offset", p.head_tube_lower_offset),
        ("seat_stay_junction_offset", p.seat_stay_junction_offset),
    ];
    for (name, v) in non_negative {
        if !(v >= 0.0 && v.is_finite()) {
            push(ViolationCode::NonPositiveDimension, name);
        }
    }
    if !p.bb_drop.is_finite() {
        push(ViolationCode::NonPositiveDimension, "bb_drop");
    }

    for (name, angle) in [
        ("head_tube_angle_deg", p.head_tube_angle_deg),
        ("seat_tube_angle_deg", p.seat_tube_angle_deg),
    ] {
        if !(angle > 0.0 && angle < 180.0) {
            push(ViolationCode::AngleOutOfRange, name);
        }
    }

    // Seat stays must attach to the seat tube, chain stays to the BB shell.
    if !(p.seat_stay_junction_offset >= 0.0 && p.seat_stay_junction_offset < p.seat_tube_length) {
        push(ViolationCode::StayIntersectionFailure, "seat_stay_junction_offset");
    }
    if !(p.chain_stay_bb_half_spacing <= p.bb_shell_length / 2.0) {
        push(ViolationCode::StayIntersectionFailure, "chain_stay_bb_half_spacing");
    }
    if p.has_chain_stay_bridge {
        check_bridge(&mut push, "chain_stay_bridge_fraction", p.chain_stay_bridge_fraction);
        if !(p.chain_stay_bridge_od > 0.0 && p.chain_stay_bridge_od.is_finite()) {
            push(ViolationCode::NonPositiveDimension, "chain_stay_bridge_od");
        }
    }
    if p.has_seat_stay_bridge {
        check_bridge(&mut push, "seat_stay_bridge_fraction", p.seat_stay_bridge_fraction);
        if !(p.seat_stay_bridge_od > 0.0 && p.seat_stay_bridge_od.is_finite()) {
            push(ViolationCode::NonPositiveDimension, "seat_stay_bridge_od");
        }
    }

    let mut walls: Vec<(&'static str, TubeKind)> = vec![
        ("top_tube_t", TubeKind::TopTube),
        ("down_tube_t", TubeKind::DownTube),
        ("seat_tube_t", TubeKind::SeatTube),
        ("head_tube_t", TubeKind::HeadTube),
        ("bb_shell_t", TubeKind::BbShell),
        ("chain_stay_t", TubeKind::ChainStay),
        ("seat_stay_t", TubeKind::SeatStay),
    ];
    if p.has_chain_stay_bridge {
        walls.push(("chain_stay_bridge_od", TubeKind::ChainStayBridge));
    }
    if p.has_seat_stay_bridge {
        walls.push(("seat_stay_bridge_od", TubeKind::SeatStayBridge));
    }
    for (name, kind) in walls {
        let (od, t) = p.tube_dimensions(kind);
        // Only meaningful when both are otherwise valid.
        if od > 0.0 && t > 0.0 && t >= od / 2.0 {
            push(ViolationCode::ThicknessExceedsRadius, name);
        }
    }

    if let Some(layout) = InPlaneLayout::solve(p) {
        for subject in layout.degenerate_members(p) {
            push(ViolationCode::DegenerateTube, subject);
        }
    }

    FeasibilityReport::from_violations(out)
}

fn check_bridge(push: &mut impl FnMut(ViolationCode, &'static str), name: &'static str, fraction: f64) {
    if !(fraction > 0.0) {
        push(ViolationCode::NonPositiveDimension, name);
    } else if !(fraction < 1.0) {
        push(ViolationCode::StayIntersectionFailure, name);
    }
}

/// Junction points of the side-view (z = 0) members.
struct InPlaneLayout {
    head_tube_top: Point3,
    head_tube_bottom: Point3,
    top_tube_head: Point3,
    down_tube_head: Point3,
    seat_tube_top: Point3,
    top_tube_seat: Point3,
    seat_stay_center: Point3,
    /// Dropout in the side view; lateral offset added later.
    dropout: Option<(f64, f64)>,
}

impl InPlaneLayout {
    /// Returns `None` when angles are unusable.
    fn solve(p: &FrameParams) -> Option<Self> {
        if !(p.head_tube_angle_deg > 0.0 && p.head_tube_angle_deg < 180.0)
            || !(p.seat_tube_angle_deg > 0.0 && p.seat_tube_angle_deg < 180.0)
        {
            return None;
        }
        let hta = p.head_tube_angle_deg.to_radians();
        let sta = p.seat_tube_angle_deg.to_radians();
        let down_head_tube = Point3::new(hta.cos(), -hta.sin(), 0.0);
        let up_seat_tube = Point3::new(-sta.cos(), sta.sin(), 0.0);

        let head_tube_top = Point3::new(p.reach, p.stack, 0.0);
        let head_tube_bottom = head_tube_top + p.head_tube_length * down_head_tube;
        let top_tube_head = head_tube_top + p.head_tube_upper_offset * down_head_tube;
        let down_tube_head = head_tube_bottom - p.head_tube_lower_offset * down_head_tube;

        let seat_tube_top = p.seat_tube_length * up_seat_tube;
        let top_tube_seat = (p.seat_tube_length - p.seat_tube_top_tube_offset) * up_seat_tube;
        let seat_stay_center = (p.seat_tube_length - p.seat_stay_junction_offset) * up_seat_tube;

        let horizontal_sq = p.chain_stay_length * p.chain_stay_length - p.bb_drop * p.bb_drop;
        let dropout = (horizontal_sq > 0.0).then(|| (-horizontal_sq.sqrt(), p.bb_drop));

        Some(InPlaneLayout {
            head_tube_top,
            head_tube_bottom,
            top_tube_head,
            down_tube_head,
            seat_tube_top,
            top_tube_seat,
            seat_stay_center,
            dropout,
        })
    }

    fn degenerate_members(&self, p: &FrameParams) -> Vec<&'static str> {
        let mut out = Vec::new();
        if p.head_tube_upper_offset + p.head_tube_lower_offset > p.head_tube_length {
            out.push("head_tube_length");
        }
        if p.seat_tube_top_tube_offset >= p.seat_tube_length {
            out.push("seat_tube_top_tube_offset");
        }
        if !((self.top_tube_head - self.top_tube_seat).norm() >= MIN_TUBE_LENGTH) {
            out.push("top_tube");
        }
        if !(self.down_tube_head.norm() >= MIN_TUBE_LENGTH) {
            out.push("down_tube");
        }
        match self.dropout {
            Some((x, y)) if (x * x + y * y).sqrt() >= MIN_TUBE_LENGTH && -x >= MIN_TUBE_LENGTH => {}
            _ => out.push("chain_stay_length"),
        }
        out
    }
}

struct SkeletonBuilder {
    nodes: Vec<SkeletonNode>,
    tubes: Vec<Tube>,
}

impl SkeletonBuilder {
    fn add_point(&mut self, label: NodeLabel, position: Point3) -> Result<(), GeometryError> {
        if !position.iter().all(|c| c.is_finite()) {
            return Err(GeometryError::BuildFailure(format!("{label:?} has non-finite coordinates")));
        }
        match self
            .nodes
            .iter_mut()
            .find(|n| (n.position - position).norm() <= MERGE_TOLERANCE)
        {
            Some(node) => node.labels.push(label),
            None => self.nodes.push(SkeletonNode { position, labels: vec![label] }),
        }
        Ok(())
    }

    fn id(&self, label: NodeLabel) -> usize {
        self.nodes
            .iter()
            .position(|n| n.labels.contains(&label))
            .expect("label registered before member")
    }

    /// Splits a straight member at its attachment points. The first and last
    /// labels are the member ends; intermediate points must lie between them.
    fn add_member(&mut self, kind: TubeKind, labels: &[NodeLabel]) -> Result<(), GeometryError> {
        let first = self.nodes[self.id(labels[0])].position;
        let last = self.nodes[self.id(*labels.last().unwrap())].position;
        let axis = last - first;
        let length = axis.norm();
        if !(length >= MIN_TUBE_LENGTH) {
            return Err(GeometryError::BuildFailure(format!("{kind:?} member has length {length:e}")));
        }
        let dir = axis / length;

        let mut stations: Vec<(f64, usize)> = Vec::with_capacity(labels.len());
        for &label in labels {
            let id = self.id(label);
            let s = (self.nodes[id].position - first).dot(&dir);
            if s < -MERGE_TOLERANCE || s > length + MERGE_TOLERANCE {
                return Err(GeometryError::BuildFailure(format!(
                    "{label:?} lies outside its {kind:?} member"
                )));
            }
            stations.push((s, id));
        }
        stations.sort_by(|a, b| a.0.total_cmp(&b.0));
        stations.dedup_by_key(|s| s.1);

        for pair in stations.windows(2) {
            let (start, end) = (pair[0].1, pair[1].1);
            let seg = (self.nodes[end].position - self.nodes[start].position).norm();
            if !(seg >= MIN_TUBE_LENGTH) {
                return Err(GeometryError::BuildFailure(format!(
                    "{kind:?} segment of length {seg:e} between junctions"
                )));
            }
            self.tubes.push(Tube { start, end, kind });
        }
        Ok(())
    }
}

fn mirror(p: Point3) -> Point3 {
    Point3::new(p.x, p.y, -p.z)
}

/// Builds the 3D wireframe of a diamond frame.
pub fn build_skeleton(params: &FrameParams) -> Result<FrameSkeleton, GeometryError> {
    use NodeLabel::*;

    let p = params;
    let layout = InPlaneLayout::solve(p)
        .ok_or_else(|| GeometryError::BuildFailure("head or seat tube angle unusable".into()))?;
    let (drop_x, drop_y) = layout
        .dropout
        .ok_or_else(|| GeometryError::BuildFailure("chain stay shorter than bb drop".into()))?;
    if p.head_tube_upper_offset + p.head_tube_lower_offset > p.head_tube_length {
        return Err(GeometryError::BuildFailure("head tube junctions out of order".into()));
    }

    let mut b = SkeletonBuilder { nodes: Vec::new(), tubes: Vec::new() };

    b.add_point(BbCenter, Point3::zeros())?;
    b.add_point(HeadTubeTop, layout.head_tube_top)?;
    b.add_point(TopTubeHeadJunction, layout.top_tube_head)?;
    b.add_point(DownTubeHeadJunction, layout.down_tube_head)?;
    b.add_point(HeadTubeBottom, layout.head_tube_bottom)?;
    b.add_point(SeatTubeTop, layout.seat_tube_top)?;
    b.add_point(TopTubeSeatJunction, layout.top_tube_seat)?;
    b.add_point(SeatStayJunctionCenter, layout.seat_stay_center)?;

    // Left side first (z < 0); right side is the exact mirror.
    let shell_left = Point3::new(0.0, 0.0, -p.bb_shell_length / 2.0);
    let root_left = Point3::new(0.0, 0.0, -p.chain_stay_bb_half_spacing);
    let dropout_left = Point3::new(drop_x, drop_y, -p.rear_axle_spacing / 2.0);
    let ss_left = layout.seat_stay_center + Point3::new(0.0, 0.0, -p.seat_stay_half_spacing);
    let cs_bridge_left = root_left + p.chain_stay_bridge_fraction * (dropout_left - root_left);
    let ss_bridge_left = ss_left + p.seat_stay_bridge_fraction * (dropout_left - ss_left);

    let sided = [
        (BbShellLeft, BbShellRight, shell_left),
        (ChainStayRootLeft, ChainStayRootRight, root_left),
        (DropoutLeft, DropoutRight, dropout_left),
        (SeatStayJunctionLeft, SeatStayJunctionRight, ss_left),
    ];
    for (left, right, pos) in sided {
        b.add_point(left, pos)?;
        b.add_point(right, mirror(pos))?;
    }
    if p.has_chain_stay_bridge {
        b.add_point(ChainStayBridgeLeft, cs_bridge_left)?;
        b.add_point(ChainStayBridgeRight, mirror(cs_bridge_left))?;
    }
    if p.has_seat_stay_bridge {
        b.add_point(SeatStayBridgeLeft, ss_bridge_left)?;
        b.add_point(SeatStayBridgeRight, mirror(ss_bridge_left))?;
    }

    b.add_member(
        TubeKind::HeadTube,
        &[HeadTubeTop, TopTubeHeadJunction, DownTubeHeadJunction, HeadTubeBottom],
    )?;
    b.add_member(
        TubeKind::SeatTube,
        &[BbCenter, TopTubeSeatJunction, SeatStayJunctionCenter, SeatTubeTop],
    )?;
    b.add_member(TubeKind::TopTube, &[TopTubeSeatJunction, TopTubeHeadJunction])?;
    b.add_member(TubeKind::DownTube, &[BbCenter, DownTubeHeadJunction])?;
    b.add_member(
        TubeKind::BbShell,
        &[BbShellLeft, ChainStayRootLeft, BbCenter, ChainStayRootRight, BbShellRight],
    )?;

    for (root, cs_bridge, ss_junction, ss_bridge, dropout) in [
        (ChainStayRootLeft, ChainStayBridgeLeft, SeatStayJunctionLeft, SeatStayBridgeLeft, DropoutLeft),
        (ChainStayRootRight, ChainStayBridgeRight, SeatStayJunctionRight, SeatStayBridgeRight, DropoutRight),
    ] {
        if p.has_chain_stay_bridge {
            b.add_member(TubeKind::ChainStay, &[root, cs_bridge, dropout])?;
        } else {
            b.add_member(TubeKind::ChainStay, &[root, dropout])?;
        }
        if p.has_seat_stay_bridge {
            b.add_member(TubeKind::SeatStay, &[ss_junction, ss_bridge, dropout])?;
        } else {
            b.add_member(TubeKind::SeatStay, &[ss_junction, dropout])?;
        }
        // Lateral stub carrying the stay to the seat tube axis.
        if b.id(ss_junction) != b.id(SeatStayJunctionCenter) {
            b.add_member(TubeKind::SeatStay, &[SeatStayJunctionCenter, ss_junction])?;
        }
    }
    if p.has_chain_stay_bridge {
        b.add_member(TubeKind::ChainStayBridge, &[ChainStayBridgeLeft, ChainStayBridgeRight])?;
    }
    if p.has_seat_stay_bridge {
        b.add_member(TubeKind::SeatStayBridge, &[SeatStayBridgeLeft, SeatStayBridgeRight])?;
    }

    Ok(FrameSkeleton { nodes: b.nodes, tubes: b.tubes })
}

/// Closed-form properties of a circular tube section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionProperties {
    pub area: f64,
    /// Second moment of area about any diameter.
    pub i_bend: f64,
    /// Polar moment.
    pub j_torsion: f64,
    pub outer_radius: f64,
}

/// Annulus section properties. `t == od / 2` gives the solid rod.
pub fn tube_section_properties(od: f64, t: f64) -> Result<SectionProperties, GeometryError> {
    if !(od.is_finite() && t.is_finite() && t > 0.0 && t <= od / 2.0) {
        return Err(GeometryError::Domain { od, t });
    }
    let ro = od / 2.0;
    let ri = ro - t;
    let id = 2.0 * ri;
    let area = PI * (ro * ro - ri * ri);
    let i_bend = PI * (od.powi(4) - id.powi(4)) / 64.0;
    Ok(SectionProperties { area, i_bend, j_torsion: 2.0 * i_bend, outer_radius: ro })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thirty_seven_columns() {
        let cols = parameter_columns();
        assert_eq!(cols.len(), 37);
        let unique: std::collections::BTreeSet<_> = cols.iter().collect();
        assert_eq!(unique.len(), 37);
    }

    #[test]
    fn reference_is_feasible_and_builds() {
        let p = FrameParams::reference_road();
        let report = check_feasibility(&p);
        assert!(report.feasible, "{:?}", report.violations);
        let sk = build_skeleton(&p).unwrap();
        assert_eq!(sk.tube_kinds().len(), 8);
        assert!(sk.tubes.iter().all(|t| sk.tube_length(t) > 0.0));
        assert_eq!(sk.position(NodeLabel::BbCenter).unwrap(), Point3::zeros());
    }

    #[test]
    fn skeleton_is_mirror_symmetric() {
        let mut p = FrameParams::reference_road();
        p.has_chain_stay_bridge = true;
        let sk = build_skeleton(&p).unwrap();
        for n in &sk.nodes {
            let m = mirror(n.position);
            assert!(
                sk.nodes.iter().any(|o| (o.position - m).norm() <= 1e-12),
                "no mirror for {:?}",
                n.labels
            );
        }
    }

    #[test]
    fn no_bridges_without_flags() {
        let mut p = FrameParams::reference_road();
        p.has_chain_stay_bridge = false;
        p.has_seat_stay_bridge = false;
        let sk = build_skeleton(&p).unwrap();
        assert!(sk
            .tubes
            .iter()
            .all(|t| !matches!(t.kind, TubeKind::ChainStayBridge | TubeKind::SeatStayBridge)));
        assert_eq!(sk.tube_kinds().len(), 7);
    }

    #[test]
    fn dropout_half_spacing() {
        let mut p = FrameParams::reference_road();
        p.rear_axle_spacing = 0.130;
        let sk = build_skeleton(&p).unwrap();
        assert_eq!(sk.position(NodeLabel::DropoutLeft).unwrap().z, -0.065);
        assert_eq!(sk.position(NodeLabel::DropoutRight).unwrap().z, 0.065);
    }

    #[test]
    fn chain_stay_side_view_length() {
        let p = FrameParams::reference_road();
        let sk = build_skeleton(&p).unwrap();
        let d = sk.position(NodeLabel::DropoutLeft).unwrap();
        assert!(((d.x * d.x + d.y * d.y).sqrt() - p.chain_stay_length).abs() < 1e-15);
        assert_eq!(d.y, p.bb_drop);
        assert!(d.x < 0.0);
    }

    #[test]
    fn coincident_roots_merge_with_shell_ends() {
        let p = FrameParams::reference_road();
        let sk = build_skeleton(&p).unwrap();
        assert_eq!(sk.node(NodeLabel::BbShellLeft), sk.node(NodeLabel::ChainStayRootLeft));
        let shell: Vec<_> = sk.tubes.iter().filter(|t| t.kind == TubeKind::BbShell).collect();
        assert_eq!(shell.len(), 2);
    }

    #[test]
    fn negative_thickness_is_reported() {
        let mut p = FrameParams::reference_road();
        p.top_tube_t = -0.001;
        let r = check_feasibility(&p);
        assert!(!r.feasible);
        assert!(r.violations.contains(&Violation {
            code: ViolationCode::NonPositiveDimension,
            subject: "top_tube_t"
        }));
    }

    #[test]
    fn angle_out_of_range() {
        let mut p = FrameParams::reference_road();
        p.head_tube_angle_deg = 190.0;
        assert!(check_feasibility(&p).has(ViolationCode::AngleOutOfRange));
        p.head_tube_angle_deg = 0.0;
        assert!(check_feasibility(&p).has(ViolationCode::AngleOutOfRange));
        p.head_tube_angle_deg = f64::NAN;
        assert!(check_feasibility(&p).has(ViolationCode::AngleOutOfRange));
    }

    #[test]
    fn thick_seat_stay() {
        let mut p = FrameParams::reference_road();
        p.seat_stay_t = 0.013;
        p.seat_stay_od = 0.020;
        let r = check_feasibility(&p);
        assert!(r.has(ViolationCode::ThicknessExceedsRadius));
    }

    #[test]
    fn stay_attachment_checks() {
        let mut p = FrameParams::reference_road();
        p.seat_stay_junction_offset = p.seat_tube_length;
        p.chain_stay_bb_half_spacing = p.bb_shell_length;
        let r = check_feasibility(&p);
        let stay: Vec<_> = r
            .violations
            .iter()
            .filter(|v| v.code == ViolationCode::StayIntersectionFailure)
            .map(|v| v.subject)
            .collect();
        assert_eq!(stay, vec!["seat_stay_junction_offset", "chain_stay_bb_half_spacing"]);
    }

    #[test]
    fn violations_accumulate() {
        let mut p = FrameParams::reference_road();
        p.top_tube_t = -0.001;
        p.seat_tube_angle_deg = 200.0;
        p.seat_stay_t = 0.009;
        let r = check_feasibility(&p);
        assert!(r.has(ViolationCode::NonPositiveDimension));
        assert!(r.has(ViolationCode::AngleOutOfRange));
        assert!(r.has(ViolationCode::ThicknessExceedsRadius));
        assert_eq!(r, check_feasibility(&p));
    }

    #[test]
    fn short_chain_stay_is_degenerate() {
        let mut p = FrameParams::reference_road();
        p.chain_stay_length = 0.05;
        let r = check_feasibility(&p);
        assert!(r.has(ViolationCode::DegenerateTube));
        assert!(matches!(build_skeleton(&p), Err(GeometryError::BuildFailure(_))));
    }

    #[test]
    fn infeasible_build_does_not_panic() {
        let mut p = FrameParams::reference_road();
        p.head_tube_angle_deg = 270.0;
        assert!(build_skeleton(&p).is_err());
        let mut p = FrameParams::reference_road();
        p.stack = f64::INFINITY;
        assert!(build_skeleton(&p).is_err());
    }

    #[test]
    fn feasible_but_unbuildable_lateral_stub() {
        // Positive spacing passes the checks but leaves a sub-micron stub.
        let mut p = FrameParams::reference_road();
        p.seat_stay_half_spacing = 5e-7;
        assert!(check_feasibility(&p).feasible);
        assert!(matches!(build_skeleton(&p), Err(GeometryError::BuildFailure(_))));
    }

    #[test]
    fn annulus_properties() {
        let s = tube_section_properties(0.025, 0.002).unwrap();
        let oracle_i = PI * (0.025f64.powi(4) - 0.021f64.powi(4)) / 64.0;
        assert!((s.i_bend - 9.6289e-9).abs() < 1e-12);
        assert_eq!(s.i_bend, oracle_i);
        assert!((s.area - 1.4451e-4).abs() < 1e-8);
        assert_eq!(s.j_torsion, 2.0 * s.i_bend);
    }

    #[test]
    fn solid_rod_limit() {
        let s = tube_section_properties(0.02, 0.01).unwrap();
        assert!((s.area - PI * 0.01 * 0.01).abs() < 1e-18);
    }

    #[test]
    fn section_domain_errors() {
        assert!(tube_section_properties(0.02, 0.0).is_err());
        assert!(tube_section_properties(0.02, 0.011).is_err());
        assert!(tube_section_properties(0.02, -0.001).is_err());
        assert!(tube_section_properties(f64::NAN, 0.001).is_err());
    }
}
