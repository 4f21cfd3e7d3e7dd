#![allow(dead_code)]

use fairkit::geom::{Curve, Dim, ParametricCurve, Side, Vec3};
use fairkit::hermite::HermiteData;
use fairkit::spirals::{generate_spiral, SpiralFamily, SpiralSpec, DEFAULT_SPIRAL_TOL};

pub fn spiral(family: SpiralFamily, s0: f64, s1: f64) -> Curve {
    Curve::Spiral(Box::new(generate_spiral(&SpiralSpec::new(family, s0, s1), DEFAULT_SPIRAL_TOL).unwrap()))
}

/// End data of a curve, with its end curvatures when `with_curvature`.
pub fn end_data(c: &Curve, with_curvature: bool) -> HermiteData {
    let (lo, hi) = c.domain();
    let a = c.derivatives_at(lo, 2, Side::Right).unwrap();
    let b = c.derivatives_at(hi, 2, Side::Left).unwrap();
    let k = |d: &[Vec3]| d[1].cross_z(d[2]) / d[1].norm().powi(3);
    let (k0, k1) = if with_curvature { (Some(k(&a)), Some(k(&b))) } else { (None, None) };
    HermiteData::from_directions(Dim::Two, a[0], b[0], a[1], b[1], k0, k1).unwrap()
}

/// Curvature samples on a uniform parameter grid, from raw curve derivatives.
pub fn sampled_kappa(c: &Curve, samples: usize) -> Vec<f64> {
    let (lo, hi) = c.domain();
    (0..=samples)
        .map(|i| {
            let t = lo + (hi - lo) * i as f64 / samples as f64;
            let side = if i == samples { Side::Left } else { Side::Right };
            let d = c.derivatives_at(t, 2, side).unwrap();
            d[1].cross_z(d[2]) / d[1].norm().powi(3)
        })
        .collect()
}

/// Direction changes in a sampled sequence.
pub fn direction_changes(k: &[f64]) -> usize {
    let mut count = 0;
    let mut last = 0.0f64;
    for w in k.windows(2) {
        let d = w[1] - w[0];
        if d == 0.0 {
            continue;
        }
        if last != 0.0 && d.signum() != last.signum() {
            count += 1;
        }
        last = d;
    }
    count
}
