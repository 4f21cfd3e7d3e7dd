use serde::{Serialize, Serializer};

use crate::diffgeom::{arc_jet_scaled, ArcJet};
use crate::geom::{bbox_diagonal, ParametricCurve, Side, Vec3};

/// Highest order examined at a joint.
pub const MAX_JOINT_ORDER: usize = 4;

const GAP_FLOOR: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContinuityTolerances {
    /// Position gap, as a fraction of the model scale.
    pub position: f64,
    /// Angle between unit tangents, radians.
    pub tangent_angle: f64,
    /// Relative gap of the curvature vector `d²r/ds²`.
    pub curvature: f64,
    /// Relative gap of `d³r/ds³` (curvature rate).
    pub curvature_rate: f64,
    /// Relative gap of `d⁴r/ds⁴` (second curvature rate).
    pub curvature_rate2: f64,
    /// Relative gap of parametric derivative vectors.
    pub parametric: f64,
}

impl Default for ContinuityTolerances {
    fn default() -> Self {
        ContinuityTolerances {
            position: 1e-8,
            tangent_angle: 1e-8,
            curvature: 1e-6,
            curvature_rate: 1e-5,
            curvature_rate2: 1e-4,
            parametric: 1e-8,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ContinuityDiagnostics {
    pub position_gap: f64,
    pub tangent_angle_gap: Option<f64>,
    pub curvature_gap: Option<f64>,
    pub curvature_rate_gap: Option<f64>,
    pub curvature_rate2_gap: Option<f64>,
    pub torsion_gap: Option<f64>,
    /// Relative gap of each parametric derivative order `1..=4`.
    pub parametric_gaps: [Option<f64>; 4],
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContinuityClass {
    /// Largest `k` with matching derivatives of orders `0..=k`; `-1` if the ends miss.
    pub parametric_order: i32,
    /// Largest `k` with matching geometric invariants of orders `0..=k`.
    pub geometric_order: i32,
    pub diagnostics: ContinuityDiagnostics,
}

/// Relative gap `|a - b| / max(min(|a|, |b|), floor)`.
///
/// Normalizing by the smaller magnitude makes a radius ratio of two read as a
/// gap of one.
pub fn relative_gap(a: Vec3, b: Vec3, floor: f64) -> f64 {
    let d = (a - b).norm();
    if d == 0.0 {
        return 0.0;
    }
    d / a.norm().min(b.norm()).max(floor)
}

/// One side of a joint: parametric derivatives and, unless the speed
/// vanishes, the arclength jet.
pub(crate) struct JointSide {
    pub(crate) derivs: Vec<Vec3>,
    pub(crate) jet: Option<ArcJet>,
}

impl JointSide {
    pub(crate) fn at<C: ParametricCurve + ?Sized>(c: &C, t: f64, side: Side, scale: f64) -> Option<JointSide> {
        let derivs = c.derivatives_at(t, MAX_JOINT_ORDER, side).ok()?;
        let jet = arc_jet_scaled(c, t, side, scale).ok();
        Some(JointSide { derivs, jet })
    }
}

pub(crate) fn classify(a: &JointSide, b: &JointSide, max_k: usize, scale: f64, tols: &ContinuityTolerances) -> ContinuityClass {
    let max_k = max_k.min(MAX_JOINT_ORDER);
    let mut diag = ContinuityDiagnostics { position_gap: a.derivs[0].distance(b.derivs[0]), ..Default::default() };
    if !(diag.position_gap <= tols.position * scale) {
        return ContinuityClass { parametric_order: -1, geometric_order: -1, diagnostics: diag };
    }

    let mut parametric = 0i32;
    let mut still = true;
    for k in 1..=MAX_JOINT_ORDER {
        let (va, vb) = (a.derivs[k], b.derivs[k]);
        let d = (va - vb).norm();
        let gap = if d == 0.0 { 0.0 } else { d / va.norm().max(vb.norm()) };
        diag.parametric_gaps[k - 1] = Some(gap);
        let pass = gap <= tols.parametric || d <= 1e-14 * scale;
        if still && pass && k <= max_k {
            parametric = k as i32;
        } else {
            still = false;
        }
    }

    let mut geometric = 0i32;
    if let (Some(ja), Some(jb)) = (a.jet, b.jet) {
        let angle = ja.tangent().angle_to(jb.tangent());
        diag.tangent_angle_gap = Some(angle);
        // magnitudes far below the model's natural 1/scale^(k-1) count as zero
        let inv = 1.0 / scale.max(f64::MIN_POSITIVE);
        let g2 = relative_gap(ja.derivs[2], jb.derivs[2], GAP_FLOOR * inv);
        let g3 = relative_gap(ja.derivs[3], jb.derivs[3], GAP_FLOOR * inv * inv);
        let g4 = relative_gap(ja.derivs[4], jb.derivs[4], GAP_FLOOR * inv * inv * inv);
        diag.curvature_gap = Some(g2);
        diag.curvature_rate_gap = Some(g3);
        diag.curvature_rate2_gap = Some(g4);
        if let (Some(ta), Some(tb)) = (ja.torsion(scale), jb.torsion(scale)) {
            diag.torsion_gap = Some((ta - tb).abs());
        }
        let passes = [angle <= tols.tangent_angle, g2 <= tols.curvature, g3 <= tols.curvature_rate, g4 <= tols.curvature_rate2];
        for (i, &p) in passes.iter().enumerate() {
            let k = i + 1;
            if k > max_k || !p {
                break;
            }
            geometric = k as i32;
        }
    }
    ContinuityClass { parametric_order: parametric, geometric_order: geometric.max(parametric), diagnostics: diag }
}

/// Continuity class of the joint formed by the end of `a` and the start of `b`.
pub fn continuity_at_joint<A, B>(a: &A, b: &B, max_k: usize, tols: &ContinuityTolerances) -> ContinuityClass
where
    A: ParametricCurve + ?Sized,
    B: ParametricCurve + ?Sized,
{
    let scale = a.scale().max(b.scale());
    let ea = JointSide::at(a, a.domain().1, Side::Left, scale);
    let sb = JointSide::at(b, b.domain().0, Side::Right, scale);
    match (ea, sb) {
        (Some(ea), Some(sb)) => {
            let joint_scale = bbox_diagonal(&[ea.derivs[0], sb.derivs[0]]).max(scale);
            classify(&ea, &sb, max_k, joint_scale, tols)
        }
        _ => ContinuityClass {
            parametric_order: -1,
            geometric_order: -1,
            diagnostics: ContinuityDiagnostics { position_gap: f64::NAN, ..Default::default() },
        },
    }
}

/// Smoothness order of a curve: analytic for a single smooth piece, else the
/// lowest geometric order over its interior breakpoints, capped at 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothness {
    Order(i32),
    Analytic,
}

impl Smoothness {
    /// Ordering key with analytic above every finite order.
    pub fn rank(self) -> i32 {
        match self {
            Smoothness::Order(k) => k,
            Smoothness::Analytic => i32::MAX,
        }
    }
}

impl PartialOrd for Smoothness {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Smoothness {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl std::fmt::Display for Smoothness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Smoothness::Order(k) => write!(f, "{k}"),
            Smoothness::Analytic => f.write_str("analytic"),
        }
    }
}

impl Serialize for Smoothness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Smoothness::Order(k) => s.serialize_i32(*k),
            Smoothness::Analytic => s.serialize_str("analytic"),
        }
    }
}

pub fn smoothness_order<C: ParametricCurve + ?Sized>(c: &C, tols: &ContinuityTolerances) -> Smoothness {
    let (lo, hi) = c.domain();
    let bps: Vec<f64> = c.breakpoints().into_iter().filter(|&t| t > lo && t < hi).collect();
    if bps.is_empty() {
        return Smoothness::Analytic;
    }
    let scale = c.scale();
    let mut order = MAX_JOINT_ORDER as i32;
    for t in bps {
        let k = match (JointSide::at(c, t, Side::Left, scale), JointSide::at(c, t, Side::Right, scale)) {
            (Some(l), Some(r)) => classify(&l, &r, MAX_JOINT_ORDER, scale, tols).geometric_order,
            _ => -1,
        };
        order = order.min(k);
    }
    Smoothness::Order(order)
}
