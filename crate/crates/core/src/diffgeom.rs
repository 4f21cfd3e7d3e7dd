//! Curvature, torsion, arc length and curvature rate of parametric curves.
//!
//! Planar curvature is signed, positive for counterclockwise turning; spatial
//! curvature is a magnitude.

use serde::Serialize;

use crate::geom::{Dim, GeomError, ParametricCurve, Side, Vec3};
use crate::jet;
use crate::spirals::{integrate, QuadratureConfig};

/// `|r'| < CUSP_TOLERANCE * scale` counts as a cusp.
pub const CUSP_TOLERANCE: f64 = 1e-12;

/// `kappa * scale` below this makes torsion undefined.
pub const INFLECTION_TOLERANCE: f64 = 1e-10;

/// Default relative tolerance for arc length.
pub const ARC_LENGTH_TOL: f64 = 1e-9;

const TABLE_SUBDIVISIONS: usize = 32;

/// Derivatives with respect to arclength at one parameter.
#[derive(Clone, Copy, Debug)]
pub struct ArcJet {
    /// `d^k r / ds^k` for `k = 0..=5`.
    pub derivs: [Vec3; 6],
    /// `|r'(t)|`.
    pub speed: f64,
    dim: Dim,
}

impl ArcJet {
    pub fn point(&self) -> Vec3 {
        self.derivs[0]
    }

    pub fn tangent(&self) -> Vec3 {
        self.derivs[1]
    }

    /// `[kappa, kappa', kappa'', kappa''']` with primes in arclength.
    ///
    /// For a spatial curve at a point of zero curvature the magnitude is not
    /// differentiable; the one-sided rate `|r'''|` is reported and higher
    /// entries are zero.
    pub fn curvature_derivatives(&self) -> [f64; 4] {
        let b = series(&self.derivs);
        let rs = jet::derive_vec(&b);
        let rss = jet::derive_vec(&rs);
        let k = match self.dim {
            Dim::Two => {
                let c = jet::cross(&rs, &rss);
                let mut k = [0.0; jet::N];
                for (ki, ci) in k.iter_mut().zip(c.iter()) {
                    *ki = ci.z;
                }
                k
            }
            Dim::Three => {
                let k2 = jet::dot(&rss, &rss);
                if k2[0] > 0.0 {
                    jet::sqrt(&k2)
                } else {
                    return [0.0, self.derivs[3].norm(), 0.0, 0.0];
                }
            }
        };
        let d = jet::to_derivatives(&k);
        [d[0], d[1], d[2], d[3]]
    }

    pub fn curvature(&self) -> f64 {
        match self.dim {
            Dim::Two => self.derivs[1].cross_z(self.derivs[2]),
            Dim::Three => self.derivs[2].norm(),
        }
    }

    /// `(T x r_ss) . r_sss / kappa^2`, or `None` where the curvature vanishes
    /// relative to `scale`.
    pub fn torsion(&self, scale: f64) -> Option<f64> {
        let b = self.derivs[1].cross(self.derivs[2]);
        let k2 = b.norm_sq();
        if !(k2.sqrt() * scale >= INFLECTION_TOLERANCE) {
            return None;
        }
        Some(b.dot(self.derivs[3]) / k2)
    }
}

fn series(d: &[Vec3; 6]) -> jet::VecSeries {
    jet::from_derivatives(d)
}

/// Arclength jet at `t`, taking the one-sided limit from `side`.
pub fn arc_jet<C: ParametricCurve + ?Sized>(c: &C, t: f64, side: Side) -> Result<ArcJet, GeomError> {
    arc_jet_scaled(c, t, side, c.scale())
}

pub(crate) fn arc_jet_scaled<C: ParametricCurve + ?Sized>(
    c: &C,
    t: f64,
    side: Side,
    scale: f64,
) -> Result<ArcJet, GeomError> {
    let d = c.derivatives_at(t, 5, side)?;
    let speed = d[1].norm();
    if !(speed >= CUSP_TOLERANCE * scale) || !speed.is_finite() {
        return Err(GeomError::Cusp { t, speed });
    }
    let mut arr = [Vec3::ZERO; 6];
    arr.copy_from_slice(&d[..6]);
    let a = jet::from_derivatives(&arr);
    let v = jet::sqrt(&jet::dot(&jet::derive_vec(&a), &jet::derive_vec(&a)));
    let s = jet::integrate(&v);
    let h = jet::revert(&s);
    let b = jet::compose_vec(&a, &h);
    let mut derivs = [Vec3::ZERO; 6];
    let mut fact = 1.0;
    for k in 0..6 {
        if k > 0 {
            fact *= k as f64;
        }
        derivs[k] = b[k] * fact;
    }
    Ok(ArcJet { derivs, speed, dim: c.dim() })
}

/// `d^k r / ds^k` for `k = 0..=5` at `t`.
pub fn arclength_derivatives<C: ParametricCurve + ?Sized>(c: &C, t: f64, side: Side) -> Result<[Vec3; 6], GeomError> {
    Ok(arc_jet(c, t, side)?.derivs)
}

fn default_side<C: ParametricCurve + ?Sized>(c: &C, t: f64) -> Side {
    if t >= c.domain().1 {
        Side::Left
    } else {
        Side::Right
    }
}

/// Signed curvature (planar) or curvature magnitude (spatial) at `t`.
pub fn curvature<C: ParametricCurve + ?Sized>(c: &C, t: f64) -> Result<f64, GeomError> {
    Ok(arc_jet(c, t, default_side(c, t))?.curvature())
}

/// `d kappa / ds` at `t`.
pub fn curvature_rate<C: ParametricCurve + ?Sized>(c: &C, t: f64) -> Result<f64, GeomError> {
    Ok(arc_jet(c, t, default_side(c, t))?.curvature_derivatives()[1])
}

/// Torsion of a spatial curve.
pub fn torsion<C: ParametricCurve + ?Sized>(c: &C, t: f64) -> Result<f64, GeomError> {
    if c.dim() == Dim::Two {
        return Err(GeomError::PlanarCurve);
    }
    arc_jet(c, t, default_side(c, t))?.torsion(c.scale()).ok_or(GeomError::Inflection { t })
}

fn speed_fn<C: ParametricCurve + ?Sized>(c: &C) -> impl Fn(f64) -> f64 + '_ {
    move |t| c.derivatives_at(t, 1, Side::Right).map(|d| d[1].norm()).unwrap_or(f64::NAN)
}

fn check_interval<C: ParametricCurve + ?Sized>(c: &C, t0: f64, t1: f64) -> Result<(), GeomError> {
    let (lo, hi) = c.domain();
    if !(t0 < t1) {
        return Err(GeomError::ReversedInterval { t0, t1 });
    }
    for t in [t0, t1] {
        if !(t >= lo && t <= hi) {
            return Err(GeomError::OutOfDomain { t, lo, hi });
        }
    }
    Ok(())
}

/// Length of the arc between parameters `t0 < t1`, to relative tolerance 1e-9.
pub fn arc_length<C: ParametricCurve + ?Sized>(c: &C, t0: f64, t1: f64) -> Result<f64, GeomError> {
    arc_length_with_tol(c, t0, t1, ARC_LENGTH_TOL)
}

pub fn arc_length_with_tol<C: ParametricCurve + ?Sized>(
    c: &C,
    t0: f64,
    t1: f64,
    rel_tol: f64,
) -> Result<f64, GeomError> {
    check_interval(c, t0, t1)?;
    let speed = speed_fn(c);
    let mut total = 0.0;
    for (a, b) in c.smooth_pieces() {
        let (a, b) = (a.max(t0), b.min(t1));
        if a < b {
            let cfg = QuadratureConfig::relative(rel_tol * 0.1);
            total += integrate(&speed, a, b, &cfg).value;
        }
    }
    Ok(total)
}

/// Total length of the curve.
pub fn total_length<C: ParametricCurve + ?Sized>(c: &C) -> Result<f64, GeomError> {
    let (lo, hi) = c.domain();
    arc_length(c, lo, hi)
}

/// Cumulative arc length on a fine parameter grid, for `s -> t` inversion.
#[derive(Clone, Debug)]
pub struct ArcLengthTable {
    params: Vec<f64>,
    lengths: Vec<f64>,
}

impl ArcLengthTable {
    pub fn new<C: ParametricCurve + ?Sized>(c: &C) -> Self {
        let speed = speed_fn(c);
        let cfg = QuadratureConfig { abs_tol: 0.0, rel_tol: 1e-12, max_intervals: 200 };
        let mut params = vec![c.domain().0];
        let mut lengths = vec![0.0];
        for (a, b) in c.smooth_pieces() {
            for i in 0..TABLE_SUBDIVISIONS {
                let ta = a + (b - a) * i as f64 / TABLE_SUBDIVISIONS as f64;
                let tb = if i + 1 == TABLE_SUBDIVISIONS {
                    b
                } else {
                    a + (b - a) * (i + 1) as f64 / TABLE_SUBDIVISIONS as f64
                };
                let l = integrate(&speed, ta, tb, &cfg).value;
                params.push(tb);
                lengths.push(lengths.last().unwrap() + l);
            }
        }
        ArcLengthTable { params, lengths }
    }

    pub fn total(&self) -> f64 {
        *self.lengths.last().unwrap()
    }

    /// Arclength from the start of the domain to `t`.
    pub fn length_at<C: ParametricCurve + ?Sized>(&self, c: &C, t: f64) -> f64 {
        let j = self.params.partition_point(|&p| p <= t).saturating_sub(1).min(self.params.len() - 2);
        let cfg = QuadratureConfig { abs_tol: 0.0, rel_tol: 1e-13, max_intervals: 200 };
        self.lengths[j] + integrate(speed_fn(c), self.params[j], t, &cfg).value
    }

    /// Parameter at arclength `s`, by bracketed Newton iteration.
    pub fn param_at<C: ParametricCurve + ?Sized>(&self, c: &C, s: f64) -> f64 {
        let total = self.total();
        if s <= 0.0 {
            return self.params[0];
        }
        if s >= total {
            return *self.params.last().unwrap();
        }
        let j = self.lengths.partition_point(|&l| l <= s).saturating_sub(1).min(self.params.len() - 2);
        let (mut lo, mut hi) = (self.params[j], self.params[j + 1]);
        let base = self.lengths[j];
        let target = s - base;
        let span = self.lengths[j + 1] - base;
        let start = self.params[j];
        let speed = speed_fn(c);
        let cfg = QuadratureConfig { abs_tol: 0.0, rel_tol: 1e-13, max_intervals: 200 };
        let mut t = lo + (hi - lo) * (target / span).clamp(0.0, 1.0);
        for _ in 0..60 {
            let f = integrate(&speed, start, t, &cfg).value - target;
            if f.abs() <= 1e-13 * total.max(f64::MIN_POSITIVE) {
                break;
            }
            if f > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let v = speed(t);
            let newton = t - f / v;
            t = if v > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1.0) {
                break;
            }
        }
        t
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProfileSample {
    pub s: f64,
    pub t: f64,
    pub kappa: f64,
    pub dkappa_ds: f64,
    pub tau: Option<f64>,
}

/// Curvature along the curve at points equally spaced in arclength.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureProfile {
    pub samples: Vec<ProfileSample>,
    pub planar: bool,
}

impl CurvatureProfile {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// `n >= 2` curvature samples equally spaced in arclength.
///
/// Torsion is recorded for spatial curves where it is defined.
pub fn sample_profile<C: ParametricCurve + ?Sized>(c: &C, n: usize) -> Result<CurvatureProfile, GeomError> {
    if n < 2 {
        return Err(GeomError::TooFewSamples { got: n, min: 2 });
    }
    let table = ArcLengthTable::new(c);
    let total = table.total();
    let scale = c.scale();
    let planar = c.dim() == Dim::Two;
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let s = total * i as f64 / (n - 1) as f64;
        let t = table.param_at(c, s);
        let side = if i + 1 == n { Side::Left } else { Side::Right };
        let j = arc_jet_scaled(c, t, side, scale)?;
        let k = j.curvature_derivatives();
        let tau = if planar { None } else { j.torsion(scale) };
        samples.push(ProfileSample { s, t, kappa: k[0], dkappa_ds: k[1], tau });
    }
    Ok(CurvatureProfile { samples, planar })
}
