//! Candidate curves built from shared end data, and a discrete minimum-energy fit.

mod elastica;

use serde::Serialize;
use thiserror::Error;

use crate::geom::{Curve, Dim, GeomError, SimilarityTransform, Vec3};

pub use elastica::{fit_minimum_energy_curve, polyline_energy, ElasticaFit};

const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HermiteError {
    #[error("invalid Hermite data: {0}")]
    InvalidData(String),
    #[error("no parabola fits the end tangents: {0}")]
    InfeasibleQuadratic(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// End points, unit end tangents and optional signed end curvatures.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HermiteData {
    pub dim: Dim,
    pub p0: Vec3,
    pub p1: Vec3,
    pub d0: Vec3,
    pub d1: Vec3,
    pub k0: Option<f64>,
    pub k1: Option<f64>,
}

impl HermiteData {
    pub fn new(dim: Dim, p0: Vec3, p1: Vec3, d0: Vec3, d1: Vec3, k0: Option<f64>, k1: Option<f64>) -> Result<Self, HermiteError> {
        let h = HermiteData { dim, p0, p1, d0, d1, k0, k1 };
        h.validate()?;
        Ok(h)
    }

    /// Like [`HermiteData::new`] but normalizes the tangent directions first.
    pub fn from_directions(
        dim: Dim,
        p0: Vec3,
        p1: Vec3,
        d0: Vec3,
        d1: Vec3,
        k0: Option<f64>,
        k1: Option<f64>,
    ) -> Result<Self, HermiteError> {
        let unit = |d: Vec3| d.normalize().ok_or_else(|| HermiteError::InvalidData("zero tangent direction".into()));
        HermiteData::new(dim, p0, p1, unit(d0)?, unit(d1)?, k0, k1)
    }

    pub fn validate(&self) -> Result<(), HermiteError> {
        let bad = |m: &str| Err(HermiteError::InvalidData(m.into()));
        if ![self.p0, self.p1, self.d0, self.d1].iter().all(|v| v.is_finite()) {
            return bad("non-finite coordinates");
        }
        if self.dim == Dim::Two && [self.p0, self.p1, self.d0, self.d1].iter().any(|v| v.z != 0.0) {
            return bad("planar data must have z = 0");
        }
        if (self.d0.norm() - 1.0).abs() > UNIT_TOL || (self.d1.norm() - 1.0).abs() > UNIT_TOL {
            return bad("tangent directions must be unit vectors");
        }
        if self.p0 == self.p1 {
            return bad("end points coincide");
        }
        if self.k0.iter().chain(self.k1.iter()).any(|k| !k.is_finite()) {
            return bad("non-finite end curvature");
        }
        if self.dim == Dim::Three && (self.k0.is_some() || self.k1.is_some()) {
            return bad("signed end curvatures need planar data");
        }
        Ok(())
    }

    pub fn has_curvature(&self) -> bool {
        self.k0.is_some() || self.k1.is_some()
    }

    pub fn chord(&self) -> f64 {
        self.p0.distance(self.p1)
    }

    /// Image under a similarity: tangents rotate, curvatures scale by `1/lambda`.
    pub fn transform(&self, tr: &SimilarityTransform) -> HermiteData {
        let l = tr.scale();
        HermiteData {
            dim: self.dim,
            p0: tr.apply_point(self.p0),
            p1: tr.apply_point(self.p1),
            d0: tr.rotate(self.d0),
            d1: tr.rotate(self.d1),
            k0: self.k0.map(|k| k / l),
            k1: self.k1.map(|k| k / l),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateKind {
    Cubic,
    Quintic,
    QuadraticBezier,
}

impl CandidateKind {
    pub const ALL: [CandidateKind; 3] = [CandidateKind::Cubic, CandidateKind::Quintic, CandidateKind::QuadraticBezier];

    pub fn name(self) -> &'static str {
        match self {
            CandidateKind::Cubic => "cubic",
            CandidateKind::Quintic => "quintic",
            CandidateKind::QuadraticBezier => "quadratic_bezier",
        }
    }

    pub fn parse(s: &str) -> Option<CandidateKind> {
        CandidateKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateFlag {
    /// The quintic was asked for but `h` had no end curvature; zero was used.
    MissingCurvatureData,
}

#[derive(Clone, Debug)]
pub struct Candidate {
    pub kind: CandidateKind,
    pub curve: Curve,
    pub flags: Vec<CandidateFlag>,
}

/// Degree-3 Bézier with tangent magnitudes equal to the chord length.
pub fn cubic_candidate(h: &HermiteData) -> Result<Curve, HermiteError> {
    h.validate()?;
    let l = h.chord();
    Ok(Curve::bezier(vec![h.p0, h.p0 + h.d0 * (l / 3.0), h.p1 - h.d1 * (l / 3.0), h.p1], h.dim)?)
}

/// Control points of the quintic with end second derivatives
/// `a_i d_i + L^2 k_i n_i`.
fn quintic_points(h: &HermiteData, k0: f64, k1: f64, a0: f64, a1: f64) -> [Vec3; 6] {
    let l = h.chord();
    let (n0, n1) = (h.d0.perp(), h.d1.perp());
    let q0 = h.p0;
    let q5 = h.p1;
    let q1 = q0 + h.d0 * (l / 5.0);
    let q4 = q5 - h.d1 * (l / 5.0);
    let q2 = q1 * 2.0 - q0 + (h.d0 * a0 + n0 * (l * l * k0)) / 20.0;
    let q3 = q4 * 2.0 - q5 + (h.d1 * a1 + n1 * (l * l * k1)) / 20.0;
    [q0, q1, q2, q3, q4, q5]
}

/// Second derivative of a quintic Bézier at `t`.
fn quintic_second(q: &[Vec3; 6], t: f64) -> Vec3 {
    let d: Vec<Vec3> = (0..4).map(|i| (q[i + 2] - q[i + 1] * 2.0 + q[i]) * 20.0).collect();
    let s = 1.0 - t;
    d[0] * (s * s * s) + d[1] * (3.0 * s * s * t) + d[2] * (3.0 * s * t * t) + d[3] * (t * t * t)
}

const GL5_X: [f64; 5] = [-0.906_179_845_938_664, -0.538_469_310_105_683, 0.0, 0.538_469_310_105_683, 0.906_179_845_938_664];
const GL5_W: [f64; 5] = [0.236_926_885_056_189, 0.478_628_670_499_366, 0.568_888_888_888_889, 0.478_628_670_499_366, 0.236_926_885_056_189];

/// Degree-5 Bézier matching points, tangents and end curvatures; the two
/// remaining tangential second-derivative components minimize `∫|r''|² dt`.
pub fn quintic_candidate(h: &HermiteData) -> Result<(Curve, Vec<CandidateFlag>), HermiteError> {
    h.validate()?;
    let mut flags = Vec::new();
    if h.k0.is_none() || h.k1.is_none() {
        flags.push(CandidateFlag::MissingCurvatureData);
    }
    let (k0, k1) = (h.k0.unwrap_or(0.0), h.k1.unwrap_or(0.0));
    // r'' is affine in (a0, a1): r'' = R + a0 U0 + a1 U1
    let base = quintic_points(h, k0, k1, 0.0, 0.0);
    let e0 = quintic_points(h, k0, k1, 1.0, 0.0);
    let e1 = quintic_points(h, k0, k1, 0.0, 1.0);
    let (mut m00, mut m01, mut m11, mut r0, mut r1) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&x, &w) in GL5_X.iter().zip(GL5_W.iter()) {
        let t = 0.5 * (x + 1.0);
        let r = quintic_second(&base, t);
        let u0 = quintic_second(&e0, t) - r;
        let u1 = quintic_second(&e1, t) - r;
        m00 += w * u0.dot(u0);
        m01 += w * u0.dot(u1);
        m11 += w * u1.dot(u1);
        r0 -= w * r.dot(u0);
        r1 -= w * r.dot(u1);
    }
    let det = m00 * m11 - m01 * m01;
    let (a0, a1) = if det.abs() > 1e-300 {
        ((r0 * m11 - r1 * m01) / det, (m00 * r1 - m01 * r0) / det)
    } else {
        (0.0, 0.0)
    };
    let q = quintic_points(h, k0, k1, a0, a1);
    Ok((Curve::bezier(q.to_vec(), h.dim)?, flags))
}

/// The parabola whose end tangent lines are those of `h`, when they meet ahead of `p0` and behind `p1`.
pub fn quadratic_candidate(h: &HermiteData) -> Result<Curve, HermiteError> {
    h.validate()?;
    // p0 + lambda d0 = p1 - mu d1, solved in the plane of d0 and d1
    let r = h.p1 - h.p0;
    let c = h.d0.dot(h.d1);
    let det = 1.0 - c * c;
    if det < 1e-14 {
        return Err(HermiteError::InfeasibleQuadratic("tangent lines are parallel".into()));
    }
    let (rd0, rd1) = (r.dot(h.d0), r.dot(h.d1));
    let lambda = (rd0 - c * rd1) / det;
    let mu = (rd1 - c * rd0) / det;
    let apex = h.p0 + h.d0 * lambda;
    let miss = apex.distance(h.p1 - h.d1 * mu);
    if miss > 1e-9 * h.chord() {
        return Err(HermiteError::InfeasibleQuadratic("tangent lines are skew".into()));
    }
    if !(lambda > 0.0 && mu > 0.0) {
        return Err(HermiteError::InfeasibleQuadratic("tangent lines diverge".into()));
    }
    Ok(Curve::bezier(vec![h.p0, apex, h.p1], h.dim)?)
}

/// Builds the requested candidates in the order given.
pub fn hermite_candidates(h: &HermiteData, kinds: &[CandidateKind]) -> Result<Vec<Candidate>, HermiteError> {
    h.validate()?;
    kinds
        .iter()
        .map(|&kind| {
            Ok(match kind {
                CandidateKind::Cubic => Candidate { kind, curve: cubic_candidate(h)?, flags: Vec::new() },
                CandidateKind::Quintic => {
                    let (curve, flags) = quintic_candidate(h)?;
                    Candidate { kind, curve, flags }
                }
                CandidateKind::QuadraticBezier => Candidate { kind, curve: quadratic_candidate(h)?, flags: Vec::new() },
            })
        })
        .collect()
}
