//! Real Gauss hypergeometric function ₂F₁(a, b; c; z) for z < 1.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypergeometricError {
    #[error("c = {0} is a non-positive integer")]
    Pole(f64),
    #[error("z = {0} is outside the real branch z < 1")]
    Domain(f64),
}

const SERIES_RADIUS: f64 = 0.5;
const MAX_TERMS: usize = 2000;

/// ₂F₁(a, b; c; z) on the real branch.
///
/// * `|z| <= 0.5`: Gauss series.
/// * `-1 <= z < -0.5`: Pfaff transformation onto `z/(z-1)` in `[1/3, 1/2]`.
/// * `z < -1`: analytic continuation along the negative axis by Taylor
///   expansion of the hypergeometric ODE, stepping from `z = -0.5`.
/// * `0.5 < z < 1`: Pfaff transformation onto the negative axis.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64, HypergeometricError> {
    if c <= 0.0 && c == c.round() {
        return Err(HypergeometricError::Pole(c));
    }
    if !(z < 1.0) || !z.is_finite() {
        return Err(HypergeometricError::Domain(z));
    }
    if z == 0.0 || a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    Ok(eval(a, b, c, z))
}

/// d/dz ₂F₁(a, b; c; z) = (ab/c) ₂F₁(a+1, b+1; c+1; z).
pub fn hyp2f1_derivative(a: f64, b: f64, c: f64, z: f64) -> Result<f64, HypergeometricError> {
    if a == 0.0 || b == 0.0 {
        hyp2f1(a, b, c, z)?;
        return Ok(0.0);
    }
    Ok(a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, z)?)
}

fn eval(a: f64, b: f64, c: f64, z: f64) -> f64 {
    if z.abs() <= SERIES_RADIUS {
        series(a, b, c, z)
    } else if z < 0.0 && z >= -1.0 {
        (1.0 - z).powf(-a) * series(a, c - b, c, z / (z - 1.0))
    } else if z < -1.0 {
        continue_negative(a, b, c, z)
    } else {
        let w = z / (z - 1.0);
        (1.0 - z).powf(-a) * continue_negative(a, c - b, c, w)
    }
}

fn series(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term == 0.0 || (term.abs() <= 1e-17 * sum.abs() && n > 2) {
            break;
        }
    }
    sum
}

/// Value and first derivative at `z0 = -0.5`, then Taylor steps of half the
/// distance to the singular point at the origin.
fn continue_negative(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let mut z0 = -SERIES_RADIUS;
    let mut f = eval(a, b, c, z0);
    let mut df = a * b / c * eval(a + 1.0, b + 1.0, c + 1.0, z0);
    loop {
        let step = (0.5 * z0).max(z - z0);
        let (nf, ndf) = taylor_step(a, b, c, z0, f, df, step);
        z0 += step;
        f = nf;
        df = ndf;
        if z0 <= z {
            return f;
        }
    }
}

/// Advances the ODE `z(1-z)F'' + [c - (a+b+1)z]F' - abF = 0` from `z0` by `h`
/// using its Taylor series at `z0`; `|h| <= |z0|/2` keeps the ratio at 1/2.
fn taylor_step(a: f64, b: f64, c: f64, z0: f64, f0: f64, f1: f64, h: f64) -> (f64, f64) {
    let p0 = z0 * (1.0 - z0);
    let p1 = 1.0 - 2.0 * z0;
    let q0 = c - (a + b + 1.0) * z0;
    let q1 = -(a + b + 1.0);
    let ab = a * b;
    // coefficients scaled by h^n to keep them O(1)
    let mut prev = f0;
    let mut cur = f1 * h;
    let mut value = prev + cur;
    let mut deriv = f1;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let next = -((p1 * nf * (nf + 1.0) + q0 * (nf + 1.0)) * cur * h
            + (-nf * (nf - 1.0) + q1 * nf - ab) * prev * h * h)
            / (p0 * (nf + 1.0) * (nf + 2.0));
        value += next;
        deriv += (nf + 2.0) * next / h;
        if n > 4 && next.abs() <= 1e-17 * value.abs() && cur.abs() <= 1e-17 * value.abs() {
            break;
        }
        prev = cur;
        cur = next;
    }
    (value, deriv)
}
