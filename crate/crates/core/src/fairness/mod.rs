//! Curve quality metrics: curvature extrema, smoothness order, curvature and
//! curvature-rate maxima, bending energy and the logarithmic curvature graph.

mod continuity;
mod energy;
mod extrema;
mod lcg;

use serde::Serialize;
use thiserror::Error;

use crate::diffgeom::{arc_jet_scaled, ArcLengthTable};
use crate::geom::{GeomError, ParametricCurve, Side};

pub use continuity::{
    continuity_at_joint, relative_gap, smoothness_order, ContinuityClass, ContinuityDiagnostics, ContinuityTolerances,
    Smoothness, MAX_JOINT_ORDER,
};
pub use energy::{bending_energy, bending_energy_estimate, EnergyEstimate, DEFAULT_ENERGY_TOL};
pub use extrema::{
    find_curvature_extrema, is_curvature_monotone, CurvatureExtremum, ExtremumKind, DEFAULT_ROOT_TOL, MERGE_FRACTION,
};
pub use lcg::{fit_line, lcg, LcgPoint, LcgResult, LineFit, LCG_CONVENTION};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FairnessError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("energy quadrature did not converge: estimate {estimate} (error {error_estimate:e})")]
    NoConvergence { estimate: f64, error_estimate: f64 },
    #[error("curvature rate vanishes or changes sign near s = {s} (dkappa/ds = {dkappa_ds:e})")]
    NonMonotoneCurvature { s: f64, dkappa_ds: f64 },
    #[error("curvature vanishes or changes sign near s = {s} (kappa = {kappa:e})")]
    NonPositiveCurvature { s: f64, kappa: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FairnessConfig {
    pub root_tol: f64,
    pub energy_tol: f64,
    pub lcg_samples: usize,
    pub continuity: ContinuityTolerances,
}

impl Default for FairnessConfig {
    fn default() -> Self {
        FairnessConfig {
            root_tol: DEFAULT_ROOT_TOL,
            energy_tol: DEFAULT_ENERGY_TOL,
            lcg_samples: 200,
            continuity: ContinuityTolerances::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LcgFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub convention: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FairnessReport {
    pub arc_length: f64,
    pub extrema: Vec<CurvatureExtremum>,
    pub extrema_count: usize,
    pub smoothness_order: Smoothness,
    pub kappa_max: f64,
    pub kappa_rate_max: f64,
    pub energy: f64,
    pub energy_converged: bool,
    pub lcg_fit: Option<LcgFit>,
    pub monotone_curvature: bool,
}

const RATE_SAMPLES_PER_PIECE: usize = 512;

/// Largest `|dkappa/ds|`, by dense sampling and golden-section refinement.
pub fn kappa_rate_max<C: ParametricCurve + ?Sized>(c: &C) -> Result<f64, FairnessError> {
    let scale = c.scale();
    let mut best: f64 = 0.0;
    for (a, b) in c.smooth_pieces() {
        let n = RATE_SAMPLES_PER_PIECE;
        let h = (b - a) / n as f64;
        let mut vals = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let (t, side) = if i == n { (b, Side::Left) } else { (a + h * i as f64, Side::Right) };
            vals.push(extrema::rate_at(c, t, side, scale)?.abs());
        }
        best = best.max(vals.iter().cloned().fold(0.0, f64::max));
        for i in 1..n {
            if vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1] {
                let t0 = a + h * (i - 1) as f64;
                let f = |t: f64| -extrema::rate_at(c, t, Side::Right, scale).map(f64::abs).unwrap_or(0.0);
                let (_, v) = extrema::golden_min(f, t0, t0 + 2.0 * h, 50);
                best = best.max(-v);
            }
        }
    }
    Ok(best)
}

/// All metrics for one curve. The LCG fit is absent when its preconditions fail.
pub fn fairness_report<C: ParametricCurve + ?Sized>(c: &C, cfg: &FairnessConfig) -> Result<FairnessReport, FairnessError> {
    let scale = c.scale();
    let table = ArcLengthTable::new(c);
    let scan = extrema::scan(c, table.total())?;
    let extrema = extrema::extrema_from_scan(c, &scan, &table, cfg.root_tol)?;
    let monotone = extrema::monotone_from_scan(c, &scan)?;

    let (lo, hi) = c.domain();
    let mut kappa_max: f64 = scan.kappa_abs_max;
    let mut probe = |t: f64, side: Side| -> Result<(), FairnessError> {
        kappa_max = kappa_max.max(arc_jet_scaled(c, t, side, scale)?.curvature().abs());
        Ok(())
    };
    probe(lo, Side::Right)?;
    probe(hi, Side::Left)?;
    for e in &extrema {
        probe(e.t, Side::Right)?;
    }
    for t in c.breakpoints() {
        probe(t, Side::Left)?;
        probe(t, Side::Right)?;
    }

    let energy = bending_energy_estimate(c, cfg.energy_tol)?;
    let lcg_fit = lcg(c, cfg.lcg_samples).ok().map(|r| LcgFit {
        slope: r.fit.slope,
        intercept: r.fit.intercept,
        r_squared: r.fit.r_squared,
        convention: LCG_CONVENTION,
    });
    Ok(FairnessReport {
        arc_length: table.total(),
        extrema_count: extrema.len(),
        extrema,
        smoothness_order: smoothness_order(c, &cfg.continuity),
        kappa_max,
        kappa_rate_max: kappa_rate_max(c)?,
        energy: energy.value,
        energy_converged: energy.converged,
        lcg_fit,
        monotone_curvature: monotone,
    })
}
