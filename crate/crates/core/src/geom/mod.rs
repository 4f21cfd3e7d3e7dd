//! Parametric curves: construction, evaluation, derivatives and similarity transforms.
//!
//! Planar curves are stored in the `z = 0` plane of [`Vec3`]; the curve's
//! [`Dim`] decides whether downstream quantities are signed (planar) or not.

mod bezier;
mod bspline;
mod piecewise;
mod polyline;
mod transform;
mod vector;

use thiserror::Error;

use crate::spirals::{SpiralCurve, SpiralSpec};

pub use bezier::BezierSegment;
pub use bspline::BSplineCurve;
pub use piecewise::PiecewiseCurve;
pub use polyline::Polyline;
pub use transform::SimilarityTransform;
pub use vector::{bbox_diagonal, Point, Vec3};

/// Highest derivative order any curve evaluates.
pub const MAX_DERIVATIVE_ORDER: usize = 5;

/// Default tolerance, in model units, for coincident segment endpoints.
pub const DEFAULT_JOIN_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("invalid knot vector: {0}")]
    InvalidKnots(String),
    #[error("segments {index} and {} do not join: gap {gap:e} exceeds tolerance {tolerance:e}", index + 1)]
    InvalidJoint { index: usize, gap: f64, tolerance: f64 },
    #[error("degenerate control data: {0}")]
    DegenerateControlData(String),
    #[error("parameter {t} outside domain [{lo}, {hi}]")]
    OutOfDomain { t: f64, lo: f64, hi: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("derivative order {0} not in 0..=5")]
    InvalidOrder(usize),
    #[error("invalid transform: {0}")]
    InvalidTransform(String),
    #[error("cusp at t = {t}: |r'| = {speed:e}")]
    Cusp { t: f64, speed: f64 },
    #[error("torsion is undefined for a planar curve")]
    PlanarCurve,
    #[error("inflection at t = {t}: |r' x r''| vanishes")]
    Inflection { t: f64 },
    #[error("interval [{t0}, {t1}] is empty or reversed")]
    ReversedInterval { t0: f64, t1: f64 },
    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { got: usize, min: usize },
    #[error("spiral construction failed: {0}")]
    Spiral(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn count(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }
}

/// Which one-sided limit to take at a breakpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Anything that can report exact parametric derivatives.
///
/// All differential-geometry and fairness operations are written against this
/// trait; [`Curve`] is the production implementation.
pub trait ParametricCurve: Sync {
    fn dim(&self) -> Dim;

    fn domain(&self) -> (f64, f64);

    /// `[C, C', ..., C^(max_order)]` at `t`; at a breakpoint the limit from `side`.
    fn derivatives_at(&self, t: f64, max_order: usize, side: Side) -> Result<Vec<Vec3>, GeomError>;

    /// Interior parameters where the curve is only piecewise smooth.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Characteristic model size (bounding-box diagonal).
    fn scale(&self) -> f64;

    /// Maximal smooth pieces of the domain.
    fn smooth_pieces(&self) -> Vec<(f64, f64)> {
        let (lo, hi) = self.domain();
        let mut knots = vec![lo];
        knots.extend(self.breakpoints().into_iter().filter(|&b| b > lo && b < hi));
        knots.push(hi);
        knots.windows(2).map(|w| (w[0], w[1])).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Bezier,
    Bspline,
    Piecewise,
    AnalyticSpiral,
    Polyline,
}

/// Plain description of a curve, validated by [`construct_curve`].
#[derive(Clone, Debug, PartialEq)]
pub enum CurveSpec {
    Bezier { dim: Dim, points: Vec<Vec3>, weights: Option<Vec<f64>> },
    BSpline { dim: Dim, degree: usize, knots: Vec<f64>, points: Vec<Vec3>, weights: Option<Vec<f64>> },
    Piecewise { segments: Vec<CurveSpec> },
    Polyline { dim: Dim, points: Vec<Vec3> },
    Spiral(SpiralSpec),
}

/// A validated, immutable parametric curve.
#[derive(Clone, Debug)]
pub enum Curve {
    Bezier { dim: Dim, segment: BezierSegment },
    BSpline { dim: Dim, spline: BSplineCurve },
    Piecewise(PiecewiseCurve),
    Spiral(Box<SpiralCurve>),
    Polyline { dim: Dim, polyline: Polyline },
}

/// Converts raw coordinate rows (all of length 2 or all of length 3) into points.
pub fn points_from_coords(rows: &[Vec<f64>]) -> Result<(Dim, Vec<Vec3>), GeomError> {
    let first = rows
        .first()
        .ok_or_else(|| GeomError::DegenerateControlData("no points given".into()))?;
    let dim = match first.len() {
        2 => Dim::Two,
        3 => Dim::Three,
        n => return Err(GeomError::DimensionMismatch(format!("points must have 2 or 3 coordinates, got {n}"))),
    };
    let mut out = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        if r.len() != dim.count() {
            return Err(GeomError::DimensionMismatch(format!(
                "point {i} has {} coordinates, expected {}",
                r.len(),
                dim.count()
            )));
        }
        out.push(Vec3::new(r[0], r[1], if r.len() == 3 { r[2] } else { 0.0 }));
    }
    Ok((dim, out))
}

fn check_planar(dim: Dim, points: &[Vec3]) -> Result<(), GeomError> {
    if dim == Dim::Two && points.iter().any(|p| p.z != 0.0) {
        return Err(GeomError::DimensionMismatch("planar control points must have z = 0".into()));
    }
    Ok(())
}

/// Validates `spec` and builds the curve.
pub fn construct_curve(spec: &CurveSpec, join_tolerance: f64) -> Result<Curve, GeomError> {
    Ok(match spec {
        CurveSpec::Bezier { dim, points, weights } => {
            check_planar(*dim, points)?;
            Curve::Bezier { dim: *dim, segment: BezierSegment::new(points.clone(), weights.clone())? }
        }
        CurveSpec::BSpline { dim, degree, knots, points, weights } => {
            check_planar(*dim, points)?;
            Curve::BSpline {
                dim: *dim,
                spline: BSplineCurve::new(*degree, knots.clone(), points.clone(), weights.clone())?,
            }
        }
        CurveSpec::Piecewise { segments } => {
            let built = segments
                .iter()
                .map(|s| construct_curve(s, join_tolerance))
                .collect::<Result<Vec<_>, _>>()?;
            Curve::Piecewise(PiecewiseCurve::new(built, join_tolerance)?)
        }
        CurveSpec::Polyline { dim, points } => {
            check_planar(*dim, points)?;
            Curve::Polyline { dim: *dim, polyline: Polyline::new(points.clone())? }
        }
        CurveSpec::Spiral(s) => Curve::Spiral(Box::new(
            crate::spirals::generate_spiral(s, crate::spirals::DEFAULT_SPIRAL_TOL)
                .map_err(|e| GeomError::Spiral(e.to_string()))?,
        )),
    })
}

impl Curve {
    pub fn bezier(points: Vec<Vec3>, dim: Dim) -> Result<Curve, GeomError> {
        construct_curve(&CurveSpec::Bezier { dim, points, weights: None }, DEFAULT_JOIN_TOLERANCE)
    }

    pub fn rational_bezier(points: Vec<Vec3>, weights: Vec<f64>, dim: Dim) -> Result<Curve, GeomError> {
        construct_curve(&CurveSpec::Bezier { dim, points, weights: Some(weights) }, DEFAULT_JOIN_TOLERANCE)
    }

    pub fn bspline(degree: usize, knots: Vec<f64>, points: Vec<Vec3>, dim: Dim) -> Result<Curve, GeomError> {
        construct_curve(
            &CurveSpec::BSpline { dim, degree, knots, points, weights: None },
            DEFAULT_JOIN_TOLERANCE,
        )
    }

    pub fn polyline(points: Vec<Vec3>, dim: Dim) -> Result<Curve, GeomError> {
        construct_curve(&CurveSpec::Polyline { dim, points }, DEFAULT_JOIN_TOLERANCE)
    }

    pub fn piecewise(segments: Vec<Curve>, join_tolerance: f64) -> Result<Curve, GeomError> {
        Ok(Curve::Piecewise(PiecewiseCurve::new(segments, join_tolerance)?))
    }

    pub fn kind(&self) -> CurveKind {
        match self {
            Curve::Bezier { .. } => CurveKind::Bezier,
            Curve::BSpline { .. } => CurveKind::Bspline,
            Curve::Piecewise(_) => CurveKind::Piecewise,
            Curve::Spiral(_) => CurveKind::AnalyticSpiral,
            Curve::Polyline { .. } => CurveKind::Polyline,
        }
    }

    fn check_domain(&self, t: f64) -> Result<f64, GeomError> {
        let (lo, hi) = self.domain();
        let slack = 1e-12 * (hi - lo);
        if !(t >= lo - slack && t <= hi + slack) {
            return Err(GeomError::OutOfDomain { t, lo, hi });
        }
        Ok(t.clamp(lo, hi))
    }

    pub fn eval(&self, t: f64) -> Result<Point, GeomError> {
        Ok(self.derivatives_at(t, 0, Side::Right)?[0])
    }

    /// `[C, C', ..., C^(max_order)]`; index is the derivative order.
    pub fn derivatives(&self, t: f64, max_order: usize) -> Result<Vec<Vec3>, GeomError> {
        self.derivatives_at(t, max_order, Side::Right)
    }

    pub fn start_point(&self) -> Result<Point, GeomError> {
        Ok(self.derivatives_at(self.domain().0, 0, Side::Right)?[0])
    }

    pub fn end_point(&self) -> Result<Point, GeomError> {
        Ok(self.derivatives_at(self.domain().1, 0, Side::Left)?[0])
    }

    /// Image of the curve under `tr`, with the same parameterization.
    pub fn transform(&self, tr: &SimilarityTransform) -> Result<Curve, GeomError> {
        if tr.dim() != self.dim() {
            return Err(GeomError::DimensionMismatch(format!(
                "{}D transform applied to a {}D curve",
                tr.dim().count(),
                self.dim().count()
            )));
        }
        Ok(self.transform_unchecked(tr))
    }

    fn transform_unchecked(&self, tr: &SimilarityTransform) -> Curve {
        let f = |p: Vec3| tr.apply_point(p);
        match self {
            Curve::Bezier { dim, segment } => Curve::Bezier { dim: *dim, segment: segment.map_points(f) },
            Curve::BSpline { dim, spline } => Curve::BSpline { dim: *dim, spline: spline.map_points(f) },
            Curve::Polyline { dim, polyline } => Curve::Polyline { dim: *dim, polyline: polyline.map_points(f) },
            Curve::Piecewise(pw) => Curve::Piecewise(pw.map_segments(|s| s.transform_unchecked(tr))),
            Curve::Spiral(s) => Curve::Spiral(Box::new(s.transformed(tr))),
        }
    }

    /// Same point set traversed backwards: `reversed(t) = self(lo + hi - t)`.
    pub fn reversed(&self) -> Curve {
        match self {
            Curve::Bezier { dim, segment } => Curve::Bezier { dim: *dim, segment: segment.reversed() },
            Curve::BSpline { dim, spline } => Curve::BSpline { dim: *dim, spline: spline.reversed() },
            Curve::Polyline { dim, polyline } => Curve::Polyline { dim: *dim, polyline: polyline.reversed() },
            Curve::Piecewise(pw) => Curve::Piecewise(pw.reversed()),
            Curve::Spiral(s) => Curve::Spiral(Box::new(s.reversed())),
        }
    }

    /// Points spanning the curve's extent, used for the model scale.
    pub fn hull_points(&self) -> Vec<Vec3> {
        match self {
            Curve::Bezier { segment, .. } => segment.points().to_vec(),
            Curve::BSpline { spline, .. } => spline.points().to_vec(),
            Curve::Polyline { polyline, .. } => polyline.points().to_vec(),
            Curve::Piecewise(pw) => pw.segments().iter().flat_map(|s| s.hull_points()).collect(),
            Curve::Spiral(s) => s.node_points(),
        }
    }
}

impl ParametricCurve for Curve {
    fn dim(&self) -> Dim {
        match self {
            Curve::Bezier { dim, .. } | Curve::BSpline { dim, .. } | Curve::Polyline { dim, .. } => *dim,
            Curve::Piecewise(pw) => pw.dim(),
            Curve::Spiral(_) => Dim::Two,
        }
    }

    fn domain(&self) -> (f64, f64) {
        match self {
            Curve::Bezier { .. } => (0.0, 1.0),
            Curve::BSpline { spline, .. } => spline.domain(),
            Curve::Polyline { polyline, .. } => polyline.domain(),
            Curve::Piecewise(pw) => pw.domain(),
            Curve::Spiral(s) => s.domain(),
        }
    }

    fn derivatives_at(&self, t: f64, max_order: usize, side: Side) -> Result<Vec<Vec3>, GeomError> {
        if max_order > MAX_DERIVATIVE_ORDER {
            return Err(GeomError::InvalidOrder(max_order));
        }
        let t = self.check_domain(t)?;
        Ok(match self {
            Curve::Bezier { segment, .. } => segment.derivatives(t, max_order),
            Curve::BSpline { spline, .. } => spline.derivatives(t, max_order, side),
            Curve::Polyline { polyline, .. } => polyline.derivatives(t, max_order, side),
            Curve::Piecewise(pw) => pw.derivatives(t, max_order, side)?,
            Curve::Spiral(s) => s.derivatives(t, max_order),
        })
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self {
            Curve::Bezier { .. } | Curve::Spiral(_) => Vec::new(),
            Curve::BSpline { spline, .. } => spline.breakpoints(),
            Curve::Polyline { polyline, .. } => polyline.breakpoints(),
            Curve::Piecewise(pw) => pw.breakpoints(),
        }
    }

    fn scale(&self) -> f64 {
        match self {
            Curve::Spiral(s) => s.scale(),
            _ => bbox_diagonal(&self.hull_points()),
        }
    }
}

/// Derivatives of `A / w` from homogeneous derivatives `[A^(k), w^(k)]`.
pub(crate) fn rational_derivatives(hom: &[[f64; 4]]) -> Vec<Vec3> {
    let w0 = hom[0][3];
    let mut out: Vec<Vec3> = Vec::with_capacity(hom.len());
    for k in 0..hom.len() {
        let mut v = Vec3::new(hom[k][0], hom[k][1], hom[k][2]);
        let mut binom = 1.0;
        for i in 1..=k {
            binom = binom * (k + 1 - i) as f64 / i as f64;
            v -= out[k - i] * (binom * hom[i][3]);
        }
        out.push(v / w0);
    }
    out
}
