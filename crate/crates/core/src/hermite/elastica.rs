use serde::Serialize;

use super::{cubic_candidate, HermiteData, HermiteError};
use crate::geom::{ParametricCurve, Vec3};

/// Result of the discrete minimum-energy fit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ElasticaFit {
    pub polyline: Vec<Vec3>,
    pub energy: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Energy of the initial guess followed by each accepted step.
    pub energy_trace: Vec<f64>,
}

impl ElasticaFit {
    /// Turning-angle curvature at interior nodes, as `(s_i, kappa_i)`.
    pub fn discrete_curvature(&self) -> Vec<(f64, f64)> {
        let p = &self.polyline;
        let mut s = 0.0;
        let mut out = Vec::with_capacity(p.len().saturating_sub(2));
        for i in 1..p.len().saturating_sub(1) {
            let (a, b) = (p[i] - p[i - 1], p[i + 1] - p[i]);
            s += a.norm();
            let mut theta = a.angle_to(b);
            if a.cross_z(b) < 0.0 {
                theta = -theta;
            }
            out.push((s, 2.0 * theta / (a.norm() + b.norm())));
        }
        out
    }
}

/// `Σ kappa_i^2 ds_i` with `kappa_i = 2 theta_i / (l_{i-1} + l_i)` and
/// `ds_i = (l_{i-1} + l_i) / 2`.
///
/// The clamped end tangents `d0`, `d1` act as zero-length edges, so the end
/// nodes contribute `2 theta^2 / l` for their turn away from the tangent.
pub fn polyline_energy(p: &[Vec3], d0: Vec3, d1: Vec3) -> f64 {
    energy_and_gradient(p, d0, d1, false).0
}

/// `2 theta^2 / l` and its gradients with respect to the edges `a` and `b`
/// meeting at a node; `l` is the sum of the lengths flagged in `counts`.
fn node_term(a: Vec3, b: Vec3, counts: (bool, bool)) -> (f64, Vec3, Vec3) {
    let (la, lb) = (a.norm(), b.norm());
    let (ua, ub) = (a / la, b / lb);
    let cos = ua.dot(ub).clamp(-1.0, 1.0);
    let sin = ua.cross(ub).norm();
    let theta = sin.atan2(ua.dot(ub));
    let l = if counts.0 { la } else { 0.0 } + if counts.1 { lb } else { 0.0 };
    let e = 2.0 * theta * theta / l;
    // theta / sin theta stays bounded as theta -> 0
    let ratio = if sin > 1e-12 { theta / sin } else { 1.0 };
    let dl = 2.0 * theta * theta / (l * l);
    let mut ga = (ub - ua * cos) * (-ratio / la) * (4.0 / l);
    let mut gb = (ua - ub * cos) * (-ratio / lb) * (4.0 / l);
    if counts.0 {
        ga -= ua * dl;
    }
    if counts.1 {
        gb -= ub * dl;
    }
    (e, ga, gb)
}

/// Energy and, when `grad`, its gradient with respect to every node.
fn energy_and_gradient(p: &[Vec3], d0: Vec3, d1: Vec3, grad: bool) -> (f64, Vec<Vec3>) {
    let n = p.len();
    let mut g = vec![Vec3::ZERO; if grad { n } else { 0 }];
    let mut e = 0.0;
    for i in 0..n {
        let (a, b, counts) = if i == 0 {
            (d0, p[1] - p[0], (false, true))
        } else if i == n - 1 {
            (p[i] - p[i - 1], d1, (true, false))
        } else {
            (p[i] - p[i - 1], p[i + 1] - p[i], (true, true))
        };
        let (ei, ga, gb) = node_term(a, b, counts);
        e += ei;
        if grad {
            if counts.0 {
                g[i] += ga;
                g[i - 1] -= ga;
            }
            if counts.1 {
                g[i + 1] += gb;
                g[i] -= gb;
            }
        }
    }
    (e, g)
}

fn dot(a: &[Vec3], b: &[Vec3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(*y)).sum()
}

/// Discrete elastica between the clamped ends of `h`.
///
/// Starts from the cubic candidate sampled at `n` nodes and runs steepest
/// descent on the inner nodes. Each line search starts from a
/// Barzilai-Borwein step and backtracks until the energy drops enough;
/// only decreasing steps are accepted. `converged` is set once the relative
/// decrease of an accepted step falls below `tol`.
pub fn fit_minimum_energy_curve(h: &HermiteData, n: usize, max_iters: usize, tol: f64) -> Result<ElasticaFit, HermiteError> {
    h.validate()?;
    if n < 8 {
        return Err(HermiteError::InvalidData(format!("elastica needs at least 8 nodes, got {n}")));
    }
    let cubic = cubic_candidate(h)?;
    let (lo, hi) = cubic.domain();
    let mut x: Vec<Vec3> =
        (0..n).map(|i| cubic.eval(lo + (hi - lo) * i as f64 / (n - 1) as f64)).collect::<Result<_, _>>()?;
    x[0] = h.p0;
    x[n - 1] = h.p1;
    let (d0, d1) = (h.d0, h.d1);
    let inner = |g: Vec<Vec3>| -> Vec<Vec3> { g[1..n - 1].to_vec() };
    let (mut energy, g) = energy_and_gradient(&x, d0, d1, true);
    let mut grad = inner(g);
    let mut trace = vec![energy];
    let mut converged = false;
    let mut iterations = 0;
    let chord = h.chord();
    let mut alpha = 1e-3 * chord * chord;
    let mut prev: Option<(Vec<Vec3>, Vec<Vec3>)> = None;
    while iterations < max_iters {
        iterations += 1;
        let gg = dot(&grad, &grad);
        if energy <= 1e-300 || gg == 0.0 {
            converged = true;
            break;
        }
        if let Some((px, pg)) = &prev {
            let sv: Vec<Vec3> = x[1..n - 1].iter().zip(px).map(|(&a, &b)| a - b).collect();
            let yv: Vec<Vec3> = grad.iter().zip(pg).map(|(&a, &b)| a - b).collect();
            let sy = dot(&sv, &yv);
            if sy > 0.0 {
                alpha = dot(&sv, &sv) / sy;
            }
        }
        let mut accepted = None;
        let mut a = alpha;
        for _ in 0..80 {
            let mut trial = x.clone();
            for (p, d) in trial[1..n - 1].iter_mut().zip(&grad) {
                *p -= *d * a;
            }
            let e = energy_and_gradient(&trial, d0, d1, false).0;
            if e.is_finite() && e < energy && e <= energy - 1e-4 * a * gg {
                accepted = Some((trial, e));
                break;
            }
            a *= 0.5;
        }
        let Some((trial, e)) = accepted else {
            // no decreasing step at any scale: stationary to working precision
            converged = true;
            break;
        };
        alpha = a;
        let change = (energy - e) / energy;
        prev = Some((x[1..n - 1].to_vec(), grad));
        x = trial;
        energy = e;
        grad = inner(energy_and_gradient(&x, d0, d1, true).1);
        trace.push(energy);
        if change < tol {
            converged = true;
            break;
        }
    }
    Ok(ElasticaFit { polyline: x, energy, iterations, converged, energy_trace: trace })
}
