//! Truncated Taylor series in one variable, used to turn parametric
//! derivatives into arclength derivatives.

use crate::geom::Vec3;

/// Number of coefficients carried (orders 0 through 5).
pub(crate) const N: usize = 6;

pub(crate) type Series = [f64; N];
pub(crate) type VecSeries = [Vec3; N];

pub(crate) fn mul(a: &Series, b: &Series) -> Series {
    let mut out = [0.0; N];
    for i in 0..N {
        for j in 0..N - i {
            out[i + j] += a[i] * b[j];
        }
    }
    out
}

pub(crate) fn dot(a: &VecSeries, b: &VecSeries) -> Series {
    let mut out = [0.0; N];
    for i in 0..N {
        for j in 0..N - i {
            out[i + j] += a[i].dot(b[j]);
        }
    }
    out
}

pub(crate) fn cross(a: &VecSeries, b: &VecSeries) -> VecSeries {
    let mut out = [Vec3::ZERO; N];
    for i in 0..N {
        for j in 0..N - i {
            out[i + j] += a[i].cross(b[j]);
        }
    }
    out
}

/// Square root of a series with positive constant term.
pub(crate) fn sqrt(a: &Series) -> Series {
    let mut out = [0.0; N];
    out[0] = a[0].sqrt();
    for k in 1..N {
        let mut acc = a[k];
        for j in 1..k {
            acc -= out[j] * out[k - j];
        }
        out[k] = acc / (2.0 * out[0]);
    }
    out
}

/// Antiderivative vanishing at zero (the top coefficient is dropped).
pub(crate) fn integrate(a: &Series) -> Series {
    let mut out = [0.0; N];
    for k in 1..N {
        out[k] = a[k - 1] / k as f64;
    }
    out
}

/// Formal derivative (the top coefficient becomes unknown and is zeroed).
pub(crate) fn derive_vec(a: &VecSeries) -> VecSeries {
    let mut out = [Vec3::ZERO; N];
    for k in 0..N - 1 {
        out[k] = a[k + 1] * (k + 1) as f64;
    }
    out
}

fn powers(h: &Series) -> [Series; N] {
    let mut p = [[0.0; N]; N];
    p[0][0] = 1.0;
    for k in 1..N {
        p[k] = mul(&p[k - 1], h);
    }
    p
}

/// Compositional inverse of `s` (requires `s[0] = 0`, `s[1] != 0`).
pub(crate) fn revert(s: &Series) -> Series {
    let mut h = [0.0; N];
    h[1] = 1.0 / s[1];
    for n in 2..N {
        let p = powers(&h);
        let mut e = 0.0;
        for (k, pk) in p.iter().enumerate().skip(1) {
            e += s[k] * pk[n];
        }
        h[n] = -e / s[1];
    }
    h
}

/// `a(h(x))` for a vector series `a` and inner series `h` with `h[0] = 0`.
pub(crate) fn compose_vec(a: &VecSeries, h: &Series) -> VecSeries {
    let p = powers(h);
    let mut out = [Vec3::ZERO; N];
    for (k, pk) in p.iter().enumerate() {
        for n in 0..N {
            out[n] += a[k] * pk[n];
        }
    }
    out
}

/// Taylor coefficients from derivative values `f^(k)(t)`.
pub(crate) fn from_derivatives(d: &[Vec3]) -> VecSeries {
    let mut out = [Vec3::ZERO; N];
    let mut fact = 1.0;
    for (k, v) in d.iter().enumerate().take(N) {
        if k > 0 {
            fact *= k as f64;
        }
        out[k] = *v / fact;
    }
    out
}

/// Derivative values from Taylor coefficients.
pub(crate) fn to_derivatives(a: &Series) -> Series {
    let mut out = *a;
    let mut fact = 1.0;
    for (k, v) in out.iter_mut().enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        *v *= fact;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_square() {
        // (1 + x)^2 = 1 + 2x + x^2
        let a = [1.0, 2.0, 1.0, 0.0, 0.0, 0.0];
        let r = sqrt(&a);
        assert!((r[0] - 1.0).abs() < 1e-15 && (r[1] - 1.0).abs() < 1e-15);
        assert!(r[2..].iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn reversion_of_exp_minus_one() {
        // inverse of e^x - 1 is ln(1 + y)
        let s = [0.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0, 1.0 / 120.0];
        let h = revert(&s);
        let ln = [0.0, 1.0, -0.5, 1.0 / 3.0, -0.25, 0.2];
        for k in 0..N {
            assert!((h[k] - ln[k]).abs() < 1e-14, "k={k}: {} vs {}", h[k], ln[k]);
        }
    }
}
