//! Planar spirals defined by a closed-form curvature function of arclength.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::hypergeometric::hyp2f1;
use super::quadrature::{integrate, QuadratureConfig};
use crate::geom::{bbox_diagonal, Dim, SimilarityTransform, Vec3};

/// Default absolute tolerance for the node integrals.
pub const DEFAULT_SPIRAL_TOL: f64 = 1e-13;

const MIN_NODES: usize = 64;
const MAX_NODES: usize = 20_000;
const MAX_TURN_PER_INTERVAL: f64 = 0.05;
const CHEB_N: usize = 16;
const CHEB_LEN: usize = CHEB_N + 1;

const GL_X: [f64; 5] = [
    0.148_874_338_981_631_210_88,
    0.433_395_394_129_247_190_80,
    0.679_409_568_299_024_406_23,
    0.865_063_366_688_984_510_73,
    0.973_906_528_517_171_720_08,
];
const GL_W: [f64; 5] = [
    0.295_524_224_714_752_870_17,
    0.269_266_719_309_996_355_09,
    0.219_086_362_515_982_043_99,
    0.149_451_349_150_580_593_15,
    0.066_671_344_308_688_137_59,
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpiralError {
    #[error("invalid spiral parameters: {0}")]
    InvalidSpec(String),
    #[error("curvature is singular at s = {s}: kappa = {kappa}")]
    KappaSingular { s: f64, kappa: f64 },
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SpiralFamily {
    /// `kappa = s / A^2`.
    Clothoid { scale: f64 },
    /// `kappa = (c0 + c1 s)^(-1/alpha)`, or `c0 exp(-c1 s)` when `alpha = 0`.
    LogAesthetic { alpha: f64, c0: f64, c1: f64 },
    /// `kappa = kappa0 * 2F1(a, b; c; -s)`.
    Superspiral { a: f64, b: f64, c: f64, kappa0: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpiralSpec {
    #[serde(flatten)]
    pub family: SpiralFamily,
    pub s0: f64,
    pub s1: f64,
    pub origin: (f64, f64),
    pub theta0: f64,
}

impl SpiralSpec {
    pub fn new(family: SpiralFamily, s0: f64, s1: f64) -> Self {
        SpiralSpec { family, s0, s1, origin: (0.0, 0.0), theta0: 0.0 }
    }
}

impl SpiralFamily {
    fn requires_positive(&self) -> bool {
        !matches!(self, SpiralFamily::Clothoid { .. })
    }

    fn validate(&self) -> Result<(), SpiralError> {
        let bad = |m: String| Err(SpiralError::InvalidSpec(m));
        match *self {
            SpiralFamily::Clothoid { scale } => {
                if !(scale.is_finite() && scale > 0.0) {
                    return bad(format!("clothoid scale must be positive, got {scale}"));
                }
            }
            SpiralFamily::LogAesthetic { alpha, c0, c1 } => {
                if ![alpha, c0, c1].iter().all(|v| v.is_finite()) {
                    return bad("log-aesthetic parameters must be finite".into());
                }
                if !(c0 > 0.0) {
                    return bad(format!("log-aesthetic c0 must be positive, got {c0}"));
                }
            }
            SpiralFamily::Superspiral { a, b, c, kappa0 } => {
                if ![a, b, c, kappa0].iter().all(|v| v.is_finite()) {
                    return bad("superspiral parameters must be finite".into());
                }
                if !(kappa0 > 0.0) {
                    return bad(format!("superspiral kappa0 must be positive, got {kappa0}"));
                }
                if c <= 0.0 && c == c.round() {
                    return bad(format!("superspiral c = {c} is a pole of 2F1"));
                }
            }
        }
        Ok(())
    }

    /// `[kappa, kappa', kappa'', kappa''']` at arclength `s`, truncated to `n` entries.
    pub fn curvature_jet(&self, s: f64, n: usize) -> [f64; 4] {
        let mut out = [0.0; 4];
        match *self {
            SpiralFamily::Clothoid { scale } => {
                let a2 = scale * scale;
                out[0] = s / a2;
                out[1] = 1.0 / a2;
            }
            SpiralFamily::LogAesthetic { alpha, c0, c1 } => {
                if alpha == 0.0 {
                    let k = c0 * (-c1 * s).exp();
                    let mut f = 1.0;
                    for o in out.iter_mut().take(n) {
                        *o = f * k;
                        f *= -c1;
                    }
                } else {
                    let u = c0 + c1 * s;
                    let e = -1.0 / alpha;
                    let mut coef = 1.0;
                    for (k, o) in out.iter_mut().enumerate().take(n) {
                        *o = coef * u.powf(e - k as f64);
                        coef *= (e - k as f64) * c1;
                    }
                }
            }
            SpiralFamily::Superspiral { a, b, c, kappa0 } => {
                let mut coef = kappa0;
                for (k, o) in out.iter_mut().enumerate().take(n) {
                    let kf = k as f64;
                    *o = if coef == 0.0 {
                        0.0
                    } else {
                        coef * hyp2f1(a + kf, b + kf, c + kf, -s).unwrap_or(f64::NAN)
                    };
                    coef *= -(a + kf) * (b + kf) / (c + kf);
                }
            }
        }
        out
    }

    pub fn curvature(&self, s: f64) -> f64 {
        self.curvature_jet(s, 1)[0]
    }
}

/// Spiral with cached tangent angle and position at a set of arclength nodes.
///
/// The parameter is arclength `s` over `[s0, s1]` of the unplaced spiral; a
/// placement similarity (applied by [`SpiralCurve::transformed`]) scales the
/// speed to its scale factor.
#[derive(Clone, Debug)]
pub struct SpiralCurve {
    spec: SpiralSpec,
    nodes: Vec<f64>,
    theta: Vec<f64>,
    /// Per interval: Chebyshev coefficients of `∫ kappa` in the interval's
    /// local variable `x ∈ [-1, 1]`, vanishing at `x = -1`.
    turning: Vec<[f64; CHEB_LEN]>,
    points: Vec<(f64, f64)>,
    extent: f64,
    placement: SimilarityTransform,
    reversed: bool,
}

/// `∫_a^b f` by 10-point Gauss–Legendre.
fn gl10(a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut sum = 0.0;
    for (&x, &w) in GL_X.iter().zip(GL_W.iter()) {
        sum += w * (f(c - h * x) + f(c + h * x));
    }
    sum * h
}

/// Chebyshev expansion of the antiderivative of `f` on `[a, b]`, in the
/// local variable, normalized to vanish at the left end.
fn antiderivative_cheb(a: f64, b: f64, f: impl Fn(f64) -> f64) -> [f64; CHEB_LEN] {
    let n = CHEB_N;
    let vals: Vec<f64> = (0..n)
        .map(|k| {
            let x = (PI * (k as f64 + 0.5) / n as f64).cos();
            f(0.5 * (a + b) + 0.5 * (b - a) * x)
        })
        .collect();
    let mut c = [0.0; CHEB_LEN + 1];
    for (j, cj) in c.iter_mut().enumerate().take(n) {
        let sum: f64 =
            vals.iter().enumerate().map(|(k, v)| v * (PI * j as f64 * (k as f64 + 0.5) / n as f64).cos()).sum();
        *cj = 2.0 * sum / n as f64;
    }
    // f = c0/2 + sum c_k T_k; integrate termwise
    let mut out = [0.0; CHEB_LEN];
    for k in 1..CHEB_LEN {
        out[k] = (c[k - 1] - c[k + 1]) / (2.0 * k as f64);
    }
    let mut at_left = 0.0;
    for (k, v) in out.iter().enumerate().skip(1) {
        at_left += if k % 2 == 0 { *v } else { -*v };
    }
    out[0] = -at_left;
    out
}

fn clenshaw(c: &[f64; CHEB_LEN], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + c[0]
}

/// Builds the node cache for `spec`, integrating to absolute tolerance `tol`.
pub fn generate_spiral(spec: &SpiralSpec, tol: f64) -> Result<SpiralCurve, SpiralError> {
    let fam = spec.family;
    fam.validate()?;
    let (s0, s1) = (spec.s0, spec.s1);
    if !(s0.is_finite() && s1.is_finite() && s0 < s1) {
        return Err(SpiralError::InvalidSpec(format!("need s0 < s1, got [{s0}, {s1}]")));
    }
    if ![spec.origin.0, spec.origin.1, spec.theta0].iter().all(|v| v.is_finite()) {
        return Err(SpiralError::InvalidSpec("initial pose must be finite".into()));
    }
    if let SpiralFamily::Superspiral { .. } = fam {
        if s0 <= -1.0 {
            return Err(SpiralError::KappaSingular { s: s0, kappa: f64::NAN });
        }
    }
    let kappa = |s: f64| fam.curvature(s);
    let check = |s: f64| -> Result<f64, SpiralError> {
        let k = kappa(s);
        if !k.is_finite() || (fam.requires_positive() && k <= 0.0) {
            return Err(SpiralError::KappaSingular { s, kappa: k });
        }
        Ok(k)
    };
    check(s0)?;
    check(s1)?;

    // Refine until the turning per interval is small and 10-point
    // Gauss-Legendre resolves the curvature to near roundoff.
    let mut pending: Vec<(f64, f64)> = (0..MIN_NODES)
        .rev()
        .map(|i| {
            let a = s0 + (s1 - s0) * i as f64 / MIN_NODES as f64;
            let b = if i + 1 == MIN_NODES { s1 } else { s0 + (s1 - s0) * (i + 1) as f64 / MIN_NODES as f64 };
            (a, b)
        })
        .collect();
    let mut nodes = vec![s0];
    let mut budget = MAX_NODES - MIN_NODES;
    while let Some((a, b)) = pending.pop() {
        let m = 0.5 * (a + b);
        let mut bad: Option<SpiralError> = None;
        let mut checked = |s: f64| match check(s) {
            Ok(k) => k,
            Err(e) => {
                bad.get_or_insert(e);
                0.0
            }
        };
        let whole = gl10(a, b, &mut checked);
        let halves = gl10(a, m, &mut checked) + gl10(m, b, &mut checked);
        if let Some(e) = bad {
            return Err(e);
        }
        let resolved = (whole - halves).abs() <= 1e-14 * halves.abs().max(1e-3);
        let split = (halves.abs() > MAX_TURN_PER_INTERVAL || !resolved) && budget > 0 && m > a && m < b;
        if split {
            budget -= 1;
            pending.push((m, b));
            pending.push((a, m));
        } else {
            nodes.push(b);
        }
    }

    let cfg = QuadratureConfig { abs_tol: tol, rel_tol: 0.0, max_intervals: 200 };
    let mut theta = vec![spec.theta0];
    let mut turning = Vec::with_capacity(nodes.len() - 1);
    let mut points = vec![spec.origin];
    for w in nodes.windows(2) {
        let (a, b) = (w[0], w[1]);
        let th0 = *theta.last().unwrap();
        let dt = integrate(kappa, a, b, &cfg);
        let cheb = antiderivative_cheb(a, b, kappa);
        let half = 0.5 * (b - a);
        let local = |s: f64| th0 + half * clenshaw(&cheb, (2.0 * s - a - b) / (b - a));
        let dx = integrate(|s| local(s).cos(), a, b, &cfg);
        let dy = integrate(|s| local(s).sin(), a, b, &cfg);
        for r in [&dt, &dx, &dy] {
            if !r.converged {
                return Err(SpiralError::QuadratureFailure(format!(
                    "interval [{a}, {b}]: error estimate {:e}",
                    r.error_estimate
                )));
            }
        }
        let (px, py) = *points.last().unwrap();
        theta.push(th0 + dt.value);
        turning.push(cheb);
        points.push((px + dx.value, py + dy.value));
    }
    let extent = bbox_diagonal(&points.iter().map(|&(x, y)| Vec3::xy(x, y)).collect::<Vec<_>>());
    Ok(SpiralCurve {
        spec: *spec,
        nodes,
        theta,
        turning,
        points,
        extent,
        placement: SimilarityTransform::identity(Dim::Two),
        reversed: false,
    })
}

impl SpiralCurve {
    pub fn spec(&self) -> &SpiralSpec {
        &self.spec
    }

    pub fn placement(&self) -> &SimilarityTransform {
        &self.placement
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.spec.s0, self.spec.s1)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Bounding-box diagonal of the placed node set.
    pub fn scale(&self) -> f64 {
        self.extent * self.placement.scale()
    }

    /// Node positions after placement.
    pub fn node_points(&self) -> Vec<Vec3> {
        self.points.iter().map(|&(x, y)| self.placement.apply_point(Vec3::xy(x, y))).collect()
    }

    /// Tangent angle and position of the unplaced spiral at arclength `s`.
    pub fn local_frame(&self, s: f64) -> (f64, Vec3) {
        let (s0, s1) = self.domain();
        let s = s.clamp(s0, s1);
        let j = self.nodes.partition_point(|&n| n <= s).saturating_sub(1).min(self.nodes.len() - 2);
        let (a, b) = (self.nodes[j], self.nodes[j + 1]);
        let thj = self.theta[j];
        let (px, py) = self.points[j];
        if s == a {
            return (thj, Vec3::xy(px, py));
        }
        let cheb = &self.turning[j];
        let half = 0.5 * (b - a);
        let local = |u: f64| thj + half * clenshaw(cheb, (2.0 * u - a - b) / (b - a));
        let dx = gl10(a, s, |u| local(u).cos());
        let dy = gl10(a, s, |u| local(u).sin());
        (local(s), Vec3::xy(px + dx, py + dy))
    }

    /// `[C, C', ..., C^(max_order)]` at parameter `t`, `max_order <= 5`.
    pub fn derivatives(&self, t: f64, max_order: usize) -> Vec<Vec3> {
        let (s0, s1) = self.domain();
        let s = if self.reversed { s0 + s1 - t } else { t };
        let (th, p) = self.local_frame(s);
        let k = self.spec.family.curvature_jet(s, max_order.saturating_sub(1).min(4));
        let (k0, k1, k2, k3) = (k[0], k[1], k[2], k[3]);
        // C^(n) = q_n e^{i theta} with q_{n+1} = q_n' + i kappa q_n
        let q = [
            (1.0, 0.0),
            (0.0, k0),
            (-k0 * k0, k1),
            (-3.0 * k0 * k1, k2 - k0 * k0 * k0),
            (k0.powi(4) - 3.0 * k1 * k1 - 4.0 * k0 * k2, k3 - 6.0 * k0 * k0 * k1),
        ];
        let (c, sn) = (th.cos(), th.sin());
        let mut out = Vec::with_capacity(max_order + 1);
        out.push(self.placement.apply_point(p));
        for (n, &(re, im)) in q.iter().enumerate().take(max_order) {
            let v = Vec3::xy(re * c - im * sn, re * sn + im * c);
            let sign = if self.reversed && n % 2 == 0 { -1.0 } else { 1.0 };
            out.push(self.placement.apply_vector(v) * sign);
        }
        out
    }

    pub fn transformed(&self, tr: &SimilarityTransform) -> SpiralCurve {
        SpiralCurve { placement: tr.compose(&self.placement), ..self.clone() }
    }

    pub fn reversed(&self) -> SpiralCurve {
        SpiralCurve { reversed: !self.reversed, ..self.clone() }
    }
}

/// Clothoid position from the Fresnel integrals, for `s0 = 0`, `theta0 = 0`.
pub fn clothoid_point(scale: f64, s: f64) -> (f64, f64) {
    let k = scale * PI.sqrt();
    let (c, sn) = super::fresnel::fresnel(s / k);
    (k * c, k * sn)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clothoid(scale: f64, s0: f64, s1: f64) -> SpiralCurve {
        generate_spiral(&SpiralSpec::new(SpiralFamily::Clothoid { scale }, s0, s1), DEFAULT_SPIRAL_TOL).unwrap()
    }

    #[test]
    fn clothoid_matches_fresnel() {
        let c = clothoid(1.3, 0.0, 3.0);
        for i in 0..=30 {
            let s = 0.1 * i as f64;
            let p = c.derivatives(s, 0)[0];
            let (x, y) = clothoid_point(1.3, s);
            assert!((p.x - x).abs() < 1e-10 && (p.y - y).abs() < 1e-10, "s={s}: {p:?} vs ({x}, {y})");
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let spec = SpiralSpec {
            family: SpiralFamily::LogAesthetic { alpha: 0.7, c0: 1.0, c1: 0.8 },
            s0: 0.0,
            s1: 2.0,
            origin: (0.5, -1.0),
            theta0: 0.4,
        };
        let c = generate_spiral(&spec, DEFAULT_SPIRAL_TOL).unwrap();
        let h = 1e-3;
        let s = 0.9;
        let d = c.derivatives(s, 5);
        for k in 1..=5 {
            let f = |u: f64| c.derivatives(u, k - 1)[k - 1];
            let fd = (f(s - 2.0 * h) - f(s + 2.0 * h) + (f(s + h) - f(s - h)) * 8.0) / (12.0 * h);
            assert!((fd - d[k]).norm() < 1e-6 * d[k].norm().max(1.0), "order {k}: {fd:?} vs {:?}", d[k]);
        }
    }

    #[test]
    fn unit_speed_and_curvature() {
        let c = clothoid(1.0, -1.0, 1.5);
        for i in 0..=10 {
            let s = -1.0 + 0.25 * i as f64;
            let d = c.derivatives(s, 2);
            assert!((d[1].norm() - 1.0).abs() < 1e-12);
            assert!((d[1].cross_z(d[2]) - s).abs() < 1e-12);
        }
    }

    #[test]
    fn superspiral_with_zero_a_is_an_arc() {
        let spec = SpiralSpec::new(SpiralFamily::Superspiral { a: 0.0, b: 1.0, c: 2.0, kappa0: 0.5 }, 0.0, 3.0);
        let c = generate_spiral(&spec, DEFAULT_SPIRAL_TOL).unwrap();
        for i in 0..=6 {
            let s = 0.5 * i as f64;
            let p = c.derivatives(s, 0)[0];
            // circle of radius 2 centred at (0, 2)
            assert!(((p - Vec3::xy(0.0, 2.0)).norm() - 2.0).abs() < 1e-11);
        }
    }

    #[test]
    fn singular_and_invalid_specs() {
        let lac = SpiralSpec::new(SpiralFamily::LogAesthetic { alpha: 1.0, c0: 1.0, c1: -1.0 }, 0.0, 2.0);
        assert!(matches!(generate_spiral(&lac, DEFAULT_SPIRAL_TOL), Err(SpiralError::KappaSingular { .. })));
        let bad = SpiralSpec::new(SpiralFamily::Clothoid { scale: 1.0 }, 1.0, 1.0);
        assert!(matches!(generate_spiral(&bad, DEFAULT_SPIRAL_TOL), Err(SpiralError::InvalidSpec(_))));
        let neg = SpiralSpec::new(SpiralFamily::Clothoid { scale: -1.0 }, 0.0, 1.0);
        assert!(matches!(generate_spiral(&neg, DEFAULT_SPIRAL_TOL), Err(SpiralError::InvalidSpec(_))));
    }

    #[test]
    fn reversal_and_placement() {
        let c = clothoid(1.0, 0.0, 1.0);
        let r = c.reversed();
        let a = c.derivatives(0.3, 2);
        let b = r.derivatives(0.7, 2);
        assert!((a[0] - b[0]).norm() < 1e-15);
        assert!((a[1] + b[1]).norm() < 1e-15);
        assert!((a[2] - b[2]).norm() < 1e-15);
        let tr = SimilarityTransform::planar(0.5, (1.0, 2.0), 3.0).unwrap();
        let t = c.transformed(&tr);
        let d = t.derivatives(0.3, 1);
        assert!((d[0] - tr.apply_point(a[0])).norm() < 1e-14);
        assert!((d[1].norm() - 3.0).abs() < 1e-14);
    }
}
