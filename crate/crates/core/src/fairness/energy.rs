use serde::Serialize;

use super::FairnessError;
use crate::diffgeom::CUSP_TOLERANCE;
use crate::geom::{GeomError, ParametricCurve, Side};
use crate::spirals::{integrate, QuadratureConfig, DEFAULT_MAX_INTERVALS};

/// Default relative tolerance for the bending energy.
pub const DEFAULT_ENERGY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyEstimate {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

/// `∫ kappa^2 ds`, integrated as `|r' x r''|^2 / |r'|^5 dt` piece by piece.
///
/// Never fails on budget exhaustion; see [`bending_energy`] for the strict form.
pub fn bending_energy_estimate<C: ParametricCurve + ?Sized>(c: &C, tol: f64) -> Result<EnergyEstimate, FairnessError> {
    let scale = c.scale();
    let mut cusp: Option<GeomError> = None;
    let mut integrand = |t: f64| -> f64 {
        match c.derivatives_at(t, 2, Side::Right) {
            Ok(d) => {
                let speed = d[1].norm();
                if !(speed >= CUSP_TOLERANCE * scale) {
                    cusp.get_or_insert(GeomError::Cusp { t, speed });
                    return 0.0;
                }
                d[1].cross(d[2]).norm_sq() / speed.powi(5)
            }
            Err(e) => {
                cusp.get_or_insert(e);
                0.0
            }
        }
    };
    let pieces = c.smooth_pieces();
    let mut results = Vec::with_capacity(pieces.len());
    for &(a, b) in &pieces {
        let cfg = QuadratureConfig { abs_tol: 0.0, rel_tol: tol, max_intervals: DEFAULT_MAX_INTERVALS };
        results.push(integrate(&mut integrand, a, b, &cfg));
    }
    if let Some(e) = cusp {
        return Err(e.into());
    }
    let value: f64 = results.iter().map(|r| r.value).sum();
    let error_estimate: f64 = results.iter().map(|r| r.error_estimate).sum();
    // pieces are judged against the total so that a flat piece cannot stall the sum
    let converged = results.iter().all(|r| r.converged) || error_estimate <= tol * value.abs();
    Ok(EnergyEstimate { value, error_estimate, converged })
}

/// Bending energy `∫ kappa^2 ds` over the whole domain, to relative tolerance `tol`.
pub fn bending_energy<C: ParametricCurve + ?Sized>(c: &C, tol: f64) -> Result<f64, FairnessError> {
    let e = bending_energy_estimate(c, tol)?;
    if !e.converged {
        return Err(FairnessError::NoConvergence { estimate: e.value, error_estimate: e.error_estimate });
    }
    Ok(e.value)
}
