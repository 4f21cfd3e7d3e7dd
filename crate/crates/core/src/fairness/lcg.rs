use serde::Serialize;

use super::FairnessError;
use crate::diffgeom::sample_profile;
use crate::geom::ParametricCurve;

/// Coordinates of the logarithmic curvature graph.
pub const LCG_CONVENTION: &str = "x = log(rho), y = log|ds/d(log rho)|, rho = 1/|kappa|";

/// Relative size below which curvature or its rate counts as zero.
const DEGENERACY: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LcgPoint {
    pub s: f64,
    pub kappa: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LcgResult {
    pub points: Vec<LcgPoint>,
    pub fit: LineFit,
}

/// Ordinary least-squares line through `(x, y)` pairs.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> LineFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(ys).map(|(&x, &y)| (y - intercept - slope * x).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    LineFit { slope, intercept, r_squared }
}

/// Logarithmic curvature graph on `n` samples equally spaced in arclength.
///
/// The curvature must keep one sign without vanishing and its rate must
/// not vanish or change sign; `|kappa|` is used so that clockwise spirals
/// are accepted.
pub fn lcg<C: ParametricCurve + ?Sized>(c: &C, n: usize) -> Result<LcgResult, FairnessError> {
    let profile = sample_profile(c, n)?;
    let kmax = profile.samples.iter().map(|p| p.kappa.abs()).fold(0.0, f64::max);
    let length = profile.samples.last().map(|p| p.s).unwrap_or(0.0);
    let rmax = profile.samples.iter().map(|p| p.dkappa_ds.abs()).fold(0.0, f64::max);
    let sign_k = profile.samples[0].kappa.signum();
    let sign_r = profile.samples[0].dkappa_ds.signum();
    let mut points = Vec::with_capacity(n);
    for p in &profile.samples {
        if !(p.kappa.abs() > DEGENERACY * kmax) || p.kappa.signum() != sign_k {
            return Err(FairnessError::NonPositiveCurvature { s: p.s, kappa: p.kappa });
        }
        let rate_floor = DEGENERACY * rmax.max(kmax / length.max(f64::MIN_POSITIVE));
        if !(p.dkappa_ds.abs() > rate_floor) || p.dkappa_ds.signum() != sign_r {
            return Err(FairnessError::NonMonotoneCurvature { s: p.s, dkappa_ds: p.dkappa_ds });
        }
        let x = -p.kappa.abs().ln();
        let y = (p.kappa / p.dkappa_ds).abs().ln();
        points.push(LcgPoint { s: p.s, kappa: p.kappa, x, y });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.y).collect();
    let fit = fit_line(&xs, &ys);
    Ok(LcgResult { points, fit })
}
