use serde::Serialize;

use super::SurfaceError;
use crate::geom::{bbox_diagonal, Vec3};

/// Tensor-product Bézier patch on `[0,1]^2`, optionally rational.
///
/// `points[i][j]` is the control point for `u`-index `i` and `v`-index `j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurfacePatch {
    points: Vec<Vec<Vec3>>,
    weights: Option<Vec<Vec<f64>>>,
    #[serde(skip)]
    scale: f64,
}

/// Point and partial derivatives up to second order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PatchJet {
    pub p: Vec3,
    pub su: Vec3,
    pub sv: Vec3,
    pub suu: Vec3,
    pub suv: Vec3,
    pub svv: Vec3,
}

type H = [f64; 4];

fn hsub(a: H, b: H) -> H {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

fn hlerp(a: H, b: H, t: f64) -> H {
    let s = 1.0 - t;
    [s * a[0] + t * b[0], s * a[1] + t * b[1], s * a[2] + t * b[2], s * a[3] + t * b[3]]
}

fn hscale(a: H, k: f64) -> H {
    [a[0] * k, a[1] * k, a[2] * k, a[3] * k]
}

/// Derivatives of orders `0..=2` of a Bézier curve with homogeneous control points.
fn bezier_jet(c: &[H], t: f64) -> [H; 3] {
    let mut out = [[0.0; 4]; 3];
    let mut diff: Vec<H> = c.to_vec();
    let mut factor = 1.0;
    for slot in out.iter_mut() {
        if diff.is_empty() {
            break;
        }
        let mut w = diff.clone();
        for r in 1..w.len() {
            for i in 0..w.len() - r {
                w[i] = hlerp(w[i], w[i + 1], t);
            }
        }
        *slot = hscale(w[0], factor);
        let m = diff.len() - 1;
        factor *= m as f64;
        diff = (0..m).map(|i| hsub(diff[i + 1], diff[i])).collect();
    }
    out
}

impl SurfacePatch {
    pub fn new(points: Vec<Vec<Vec3>>, weights: Option<Vec<Vec<f64>>>) -> Result<Self, SurfaceError> {
        let bad = |m: &str| Err(SurfaceError::InvalidPatch(m.into()));
        let rows = points.len();
        if rows < 2 {
            return bad("control net needs at least two rows");
        }
        let cols = points[0].len();
        if cols < 2 || points.iter().any(|r| r.len() != cols) {
            return bad("control net rows must have equal length of at least two");
        }
        if points.iter().flatten().any(|p| !p.is_finite()) {
            return bad("non-finite control point");
        }
        if let Some(w) = &weights {
            if w.len() != rows || w.iter().any(|r| r.len() != cols) {
                return bad("weight net shape differs from the control net");
            }
            if w.iter().flatten().any(|&x| !(x > 0.0 && x.is_finite())) {
                return bad("weights must be positive and finite");
            }
        }
        let scale = bbox_diagonal(points.iter().flatten());
        if !(scale > 0.0) {
            return bad("control net collapses to a point");
        }
        Ok(SurfacePatch { points, weights, scale })
    }

    /// Degrees `(m, n)` in `u` and `v`.
    pub fn degrees(&self) -> (usize, usize) {
        (self.points.len() - 1, self.points[0].len() - 1)
    }

    pub fn points(&self) -> &[Vec<Vec3>] {
        &self.points
    }

    pub fn weights(&self) -> Option<&[Vec<f64>]> {
        self.weights.as_deref()
    }

    /// Bounding-box diagonal of the control net.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn homogeneous(&self, i: usize, j: usize) -> H {
        let p = self.points[i][j];
        let w = self.weights.as_ref().map_or(1.0, |w| w[i][j]);
        [p.x * w, p.y * w, p.z * w, w]
    }

    fn check(u: f64, v: f64) -> Result<(), SurfaceError> {
        if (0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&v) {
            Ok(())
        } else {
            Err(SurfaceError::OutOfDomain { u, v })
        }
    }

    pub fn jet(&self, u: f64, v: f64) -> Result<PatchJet, SurfaceError> {
        Self::check(u, v)?;
        let (m, n) = self.degrees();
        // v-derivatives of every row, then u-derivatives of those columns
        let rows: Vec<[H; 3]> = (0..=m)
            .map(|i| bezier_jet(&(0..=n).map(|j| self.homogeneous(i, j)).collect::<Vec<_>>(), v))
            .collect();
        let mut d = [[[0.0; 4]; 3]; 3];
        for (jv, row) in d.iter_mut().enumerate() {
            let col: Vec<H> = rows.iter().map(|r| r[jv]).collect();
            let du = bezier_jet(&col, u);
            for iu in 0..3 {
                row[iu] = du[iu];
            }
        }
        // d[jv][iu] is the (iu, jv) partial of the homogeneous map
        let w = d[0][0][3];
        let v3 = |h: H| Vec3::new(h[0], h[1], h[2]);
        let p = v3(d[0][0]) / w;
        let (wu, wv) = (d[0][1][3], d[1][0][3]);
        let (wuu, wuv, wvv) = (d[0][2][3], d[1][1][3], d[2][0][3]);
        let su = (v3(d[0][1]) - p * wu) / w;
        let sv = (v3(d[1][0]) - p * wv) / w;
        let suu = (v3(d[0][2]) - su * (2.0 * wu) - p * wuu) / w;
        let svv = (v3(d[2][0]) - sv * (2.0 * wv) - p * wvv) / w;
        let suv = (v3(d[1][1]) - su * wv - sv * wu - p * wuv) / w;
        Ok(PatchJet { p, su, sv, suu, suv, svv })
    }

    pub fn eval(&self, u: f64, v: f64) -> Result<Vec3, SurfaceError> {
        Ok(self.jet(u, v)?.p)
    }

    /// Unit normal `S_u x S_v / |S_u x S_v|`.
    pub fn normal(&self, u: f64, v: f64) -> Result<Vec3, SurfaceError> {
        let j = self.jet(u, v)?;
        self.normal_of(&j, u, v)
    }

    pub(crate) fn normal_of(&self, j: &PatchJet, u: f64, v: f64) -> Result<Vec3, SurfaceError> {
        let n = j.su.cross(j.sv);
        // |S_u x S_v| carries units of area
        if !(n.norm() >= 1e-12 * self.scale * self.scale) {
            return Err(SurfaceError::DegenerateNormal { u, v });
        }
        Ok(n / n.norm())
    }

    /// The two halves of the patch split at `u = t` by de Casteljau subdivision.
    pub fn split_u(&self, t: f64) -> Result<(SurfacePatch, SurfacePatch), SurfaceError> {
        if !(t > 0.0 && t < 1.0) {
            return Err(SurfaceError::OutOfDomain { u: t, v: 0.0 });
        }
        let (m, n) = self.degrees();
        let mut left = vec![vec![[0.0; 4]; n + 1]; m + 1];
        let mut right = left.clone();
        for j in 0..=n {
            let mut w: Vec<H> = (0..=m).map(|i| self.homogeneous(i, j)).collect();
            left[0][j] = w[0];
            right[m][j] = w[m];
            for r in 1..=m {
                for i in 0..=m - r {
                    w[i] = hlerp(w[i], w[i + 1], t);
                }
                left[r][j] = w[0];
                right[m - r][j] = w[m - r];
            }
        }
        let rational = self.weights.is_some();
        let build = |net: Vec<Vec<H>>| {
            let points = net.iter().map(|r| r.iter().map(|h| Vec3::new(h[0] / h[3], h[1] / h[3], h[2] / h[3])).collect()).collect();
            let weights = rational.then(|| net.iter().map(|r| r.iter().map(|h| h[3]).collect()).collect());
            SurfacePatch::new(points, weights)
        };
        Ok((build(left)?, build(right)?))
    }

    /// The patch with every control point mapped by `f`.
    pub fn map_points(&self, f: impl Fn(Vec3) -> Vec3) -> Result<SurfacePatch, SurfaceError> {
        let points = self.points.iter().map(|r| r.iter().map(|&p| f(p)).collect()).collect();
        SurfacePatch::new(points, self.weights.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bilinear() -> SurfacePatch {
        SurfacePatch::new(
            vec![
                vec![Vec3::new(0.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.3)],
                vec![Vec3::new(1.0, 0.0, -0.2), Vec3::new(1.0, 1.0, 0.5)],
            ],
            None,
        )
        .unwrap()
    }

    #[test]
    fn corners_interpolate() {
        let p = bilinear();
        assert_eq!(p.eval(0.0, 0.0).unwrap(), Vec3::new(0.0, 0.0, 0.0));
        assert_eq!(p.eval(1.0, 0.0).unwrap(), Vec3::new(1.0, 0.0, -0.2));
        assert_eq!(p.eval(0.0, 1.0).unwrap(), Vec3::new(0.0, 1.0, 0.3));
        assert_eq!(p.eval(1.0, 1.0).unwrap(), Vec3::new(1.0, 1.0, 0.5));
    }

    #[test]
    fn planar_patch_normal() {
        let net = (0..3).map(|i| (0..4).map(|j| Vec3::new(i as f64, j as f64 * 0.5, 0.0)).collect()).collect();
        let p = SurfacePatch::new(net, None).unwrap();
        for (u, v) in [(0.0, 0.0), (0.3, 0.7), (1.0, 1.0)] {
            assert!(p.normal(u, v).unwrap().distance(Vec3::new(0.0, 0.0, 1.0)) < 1e-15);
        }
    }

    #[test]
    fn collapsed_corner() {
        let apex = Vec3::new(0.0, 0.0, 1.0);
        let p = SurfacePatch::new(
            vec![vec![apex, apex], vec![Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)]],
            None,
        )
        .unwrap();
        assert_eq!(p.normal(0.0, 0.0), Err(SurfaceError::DegenerateNormal { u: 0.0, v: 0.0 }));
        assert!(p.normal(0.5, 0.5).is_ok());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let net: Vec<Vec<Vec3>> = (0..4)
            .map(|i| (0..3).map(|j| Vec3::new(i as f64, j as f64, ((i * 3 + j) as f64).sin())).collect())
            .collect();
        let w: Vec<Vec<f64>> = (0..4).map(|i| (0..3).map(|j| 1.0 + 0.1 * ((i + 2 * j) % 3) as f64).collect()).collect();
        let p = SurfacePatch::new(net, Some(w)).unwrap();
        let (u, v, e) = (0.4, 0.55, 1e-5);
        let j = p.jet(u, v).unwrap();
        let ju = |a: f64| p.jet(a, v).unwrap();
        let jv = |b: f64| p.jet(u, b).unwrap();
        assert!(((ju(u + e).p - ju(u - e).p) / (2.0 * e)).distance(j.su) < 1e-8);
        assert!(((jv(v + e).p - jv(v - e).p) / (2.0 * e)).distance(j.sv) < 1e-8);
        assert!(((ju(u + e).su - ju(u - e).su) / (2.0 * e)).distance(j.suu) < 1e-7);
        assert!(((jv(v + e).su - jv(v - e).su) / (2.0 * e)).distance(j.suv) < 1e-7);
        assert!(((jv(v + e).sv - jv(v - e).sv) / (2.0 * e)).distance(j.svv) < 1e-7);
    }

    #[test]
    fn split_halves_agree() {
        let net: Vec<Vec<Vec3>> = (0..4)
            .map(|i| (0..4).map(|j| Vec3::new(i as f64, j as f64, ((i * 5 + j) as f64).cos())).collect())
            .collect();
        let p = SurfacePatch::new(net, None).unwrap();
        let (a, b) = p.split_u(0.3).unwrap();
        for v in [0.0, 0.25, 0.9] {
            assert!(a.eval(0.5, v).unwrap().distance(p.eval(0.15, v).unwrap()) < 1e-14);
            assert!(b.eval(0.5, v).unwrap().distance(p.eval(0.65, v).unwrap()) < 1e-14);
        }
    }
}
