use serde::{Serialize, Serializer};

use super::{PatchJet, SurfaceError, SurfacePatch};
use crate::geom::Vec3;

pub const DEFAULT_STATIONS: usize = 33;
pub const DEFAULT_BANDS: usize = 20;

/// Zebra value `s = n . view` and its stripe index among `bands` stripes.
pub fn zebra_value(p: &SurfacePatch, u: f64, v: f64, view: Vec3, bands: usize) -> Result<(f64, usize), SurfaceError> {
    if bands < 2 {
        return Err(SurfaceError::InvalidArgument(format!("need at least 2 bands, got {bands}")));
    }
    let s = p.normal(u, v)?.dot(view).clamp(-1.0, 1.0);
    Ok((s, band_of(s, bands)))
}

fn band_of(s: f64, bands: usize) -> usize {
    let b = ((s + 1.0) / 2.0 * bands as f64).floor();
    (b.max(0.0) as usize).min(bands - 1)
}

/// One side of the unit parameter square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Edge {
    U0,
    U1,
    V0,
    V1,
}

impl Edge {
    fn at(self, t: f64) -> (f64, f64) {
        match self {
            Edge::U0 => (0.0, t),
            Edge::U1 => (1.0, t),
            Edge::V0 => (t, 0.0),
            Edge::V1 => (t, 1.0),
        }
    }

    fn along(self, j: &PatchJet) -> Vec3 {
        match self {
            Edge::U0 | Edge::U1 => j.sv,
            Edge::V0 | Edge::V1 => j.su,
        }
    }

    pub fn parse(s: &str) -> Option<Edge> {
        match s {
            "u0" => Some(Edge::U0),
            "u1" => Some(Edge::U1),
            "v0" => Some(Edge::V0),
            "v1" => Some(Edge::V1),
            _ => None,
        }
    }
}

/// Which edges are shared; `reversed` runs `b`'s edge backwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundarySpec {
    pub a: Edge,
    pub b: Edge,
    pub reversed: bool,
}

impl Default for BoundarySpec {
    fn default() -> Self {
        BoundarySpec { a: Edge::U1, b: Edge::U0, reversed: false }
    }
}

/// Position tolerance is relative to the larger patch scale; curvature gaps are relative.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AuditTolerances {
    pub position: f64,
    pub normal_angle: f64,
    pub curvature: f64,
}

impl Default for AuditTolerances {
    fn default() -> Self {
        AuditTolerances { position: 1e-8, normal_angle: 1e-8, curvature: 1e-6 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Station {
    pub t: f64,
    pub position_gap: f64,
    pub normal_angle: f64,
    /// Relative normal-curvature gaps along the boundary, across it, and diagonally.
    pub curvature_gaps: [f64; 3],
    pub zebra_kink: f64,
    pub zebra_a: f64,
    pub zebra_b: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Mismatch,
    G0,
    G1,
    G2,
}

impl Verdict {
    /// Geometric order, or `None` for a mismatch.
    pub fn order(self) -> Option<u8> {
        match self {
            Verdict::Mismatch => None,
            Verdict::G0 => Some(0),
            Verdict::G1 => Some(1),
            Verdict::G2 => Some(2),
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.order() {
            Some(k) => write!(f, "G{k}"),
            None => f.write_str("mismatch"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.order() {
            Some(k) => s.serialize_u8(k),
            None => s.serialize_str("mismatch"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointAudit {
    pub stations: Vec<Station>,
    pub verdict: Verdict,
    pub max_position_gap: f64,
    pub max_normal_angle: f64,
    pub max_curvature_gap: f64,
    pub max_zebra_kink: f64,
}

/// Surface-side quantities at one boundary point.
struct Frame {
    jet: PatchJet,
    n: Vec3,
    e: f64,
    f: f64,
    g: f64,
}

impl Frame {
    fn new(p: &SurfacePatch, u: f64, v: f64) -> Result<Frame, SurfaceError> {
        let jet = p.jet(u, v)?;
        let n = p.normal_of(&jet, u, v)?;
        Ok(Frame { n, e: jet.su.dot(jet.su), f: jet.su.dot(jet.sv), g: jet.sv.dot(jet.sv), jet })
    }

    /// Parameter-plane coordinates of a tangent vector with given inner products against `S_u`, `S_v`.
    fn solve(&self, a: f64, b: f64) -> (f64, f64) {
        let det = self.e * self.g - self.f * self.f;
        ((self.g * a - self.f * b) / det, (self.e * b - self.f * a) / det)
    }

    /// Normal curvature along the projection of `w` into this tangent plane.
    fn normal_curvature(&self, w: Vec3) -> f64 {
        let w = w - self.n * self.n.dot(w);
        let (a, b) = self.solve(w.dot(self.jet.su), w.dot(self.jet.sv));
        let j = &self.jet;
        let second = a * a * j.suu.dot(self.n) + 2.0 * a * b * j.suv.dot(self.n) + b * b * j.svv.dot(self.n);
        let first = a * a * self.e + 2.0 * a * b * self.f + b * b * self.g;
        second / first
    }

    /// Surface gradient of `s = n . view`.
    fn zebra_gradient(&self, view: Vec3) -> Vec3 {
        let j = &self.jet;
        let big = j.su.cross(j.sv);
        let len = big.norm();
        let dn = |d: Vec3| (d - self.n * self.n.dot(d)) / len;
        let nu = dn(j.suu.cross(j.sv) + j.su.cross(j.suv));
        let nv = dn(j.suv.cross(j.sv) + j.su.cross(j.svv));
        let (a, b) = self.solve(nu.dot(view), nv.dot(view));
        j.su * a + j.sv * b
    }
}

fn relative_gap(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}

/// Angle between two undirected lines.
fn line_angle(a: Vec3, b: Vec3) -> f64 {
    a.cross(b).norm().atan2(a.dot(b).abs())
}

/// Samples the shared boundary at `stations` uniform parameters and grades
/// the joint by the highest order met at every station.
pub fn audit_joint(
    a: &SurfacePatch,
    b: &SurfacePatch,
    boundary: BoundarySpec,
    view: Vec3,
    stations: usize,
    tols: &AuditTolerances,
) -> Result<JointAudit, SurfaceError> {
    if stations < 2 {
        return Err(SurfaceError::InvalidArgument(format!("need at least 2 stations, got {stations}")));
    }
    let view = view.normalize().ok_or_else(|| SurfaceError::InvalidArgument("zero view vector".into()))?;
    let scale = a.scale().max(b.scale());
    let floor = 1e-3 / scale;
    let mut out = Vec::with_capacity(stations);
    for k in 0..stations {
        let t = k as f64 / (stations - 1) as f64;
        let (ua, va) = boundary.a.at(t);
        let (ub, vb) = boundary.b.at(if boundary.reversed { 1.0 - t } else { t });
        let fa = Frame::new(a, ua, va)?;
        let fb = Frame::new(b, ub, vb)?;
        let along = boundary.a.along(&fa.jet).normalize().unwrap_or(fa.jet.su / fa.jet.su.norm());
        let across = fa.n.cross(along);
        let diagonal = (along + across) / 2f64.sqrt();
        let mut curvature_gaps = [0.0; 3];
        for (gap, w) in curvature_gaps.iter_mut().zip([along, across, diagonal]) {
            *gap = relative_gap(fa.normal_curvature(w), fb.normal_curvature(w), floor);
        }
        let (ga, gb) = (fa.zebra_gradient(view), fb.zebra_gradient(view));
        // isophote directions are perpendicular to the gradients in the tangent plane
        let zebra_kink = if ga.norm() * scale < 1e-12 || gb.norm() * scale < 1e-12 {
            0.0
        } else {
            line_angle(fa.n.cross(ga), fb.n.cross(gb))
        };
        out.push(Station {
            t,
            position_gap: fa.jet.p.distance(fb.jet.p),
            normal_angle: fa.n.angle_to(fb.n),
            curvature_gaps,
            zebra_kink,
            zebra_a: fa.n.dot(view),
            zebra_b: fb.n.dot(view),
        });
    }
    let max = |f: &dyn Fn(&Station) -> f64| out.iter().map(f).fold(0.0, f64::max);
    let max_position_gap = max(&|s| s.position_gap);
    let max_normal_angle = max(&|s| s.normal_angle);
    let max_curvature_gap = max(&|s| s.curvature_gaps.iter().cloned().fold(0.0, f64::max));
    let verdict = if !(max_position_gap <= tols.position * scale) {
        Verdict::Mismatch
    } else if !(max_normal_angle <= tols.normal_angle) {
        Verdict::G0
    } else if !(max_curvature_gap <= tols.curvature) {
        Verdict::G1
    } else {
        Verdict::G2
    };
    Ok(JointAudit {
        max_zebra_kink: max(&|s| s.zebra_kink),
        stations: out,
        verdict,
        max_position_gap,
        max_normal_angle,
        max_curvature_gap,
    })
}
