use super::{rational_derivatives, GeomError, Vec3};

/// A single (optionally rational) Bézier segment on the parameter domain `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BezierSegment {
    points: Vec<Vec3>,
    weights: Option<Vec<f64>>,
}

impl BezierSegment {
    pub fn new(points: Vec<Vec3>, weights: Option<Vec<f64>>) -> Result<Self, GeomError> {
        if points.len() < 2 {
            return Err(GeomError::DegenerateControlData(format!(
                "a Bézier segment needs at least 2 control points, got {}",
                points.len()
            )));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(GeomError::DegenerateControlData(format!(
                "control point {i} is not finite"
            )));
        }
        if let Some(w) = &weights {
            if w.len() != points.len() {
                return Err(GeomError::DegenerateControlData(format!(
                    "{} weights for {} control points",
                    w.len(),
                    points.len()
                )));
            }
            if let Some(i) = w.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
                return Err(GeomError::DegenerateControlData(format!(
                    "weight {i} must be finite and positive"
                )));
            }
        }
        Ok(BezierSegment { points, weights })
    }

    pub fn degree(&self) -> usize {
        self.points.len() - 1
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn is_rational(&self) -> bool {
        self.weights.is_some()
    }

    pub(crate) fn map_points(&self, f: impl Fn(Vec3) -> Vec3) -> Self {
        BezierSegment {
            points: self.points.iter().map(|&p| f(p)).collect(),
            weights: self.weights.clone(),
        }
    }

    pub(crate) fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        let weights = self.weights.as_ref().map(|w| w.iter().rev().copied().collect());
        BezierSegment { points, weights }
    }

    /// Splits at `t` by de Casteljau subdivision.
    pub fn split(&self, t: f64) -> (BezierSegment, BezierSegment) {
        let mut hom: Vec<[f64; 4]> = self.homogeneous();
        let n = hom.len();
        let mut left = Vec::with_capacity(n);
        let mut right = Vec::with_capacity(n);
        left.push(hom[0]);
        right.push(hom[n - 1]);
        for level in 1..n {
            for i in 0..n - level {
                for c in 0..4 {
                    hom[i][c] += t * (hom[i + 1][c] - hom[i][c]);
                }
            }
            left.push(hom[0]);
            right.push(hom[n - 1 - level]);
        }
        right.reverse();
        let rational = self.weights.is_some();
        let unpack = |h: Vec<[f64; 4]>| {
            let points = h.iter().map(|q| Vec3::new(q[0] / q[3], q[1] / q[3], q[2] / q[3])).collect();
            let weights = rational.then(|| h.iter().map(|q| q[3]).collect());
            BezierSegment { points, weights }
        };
        (unpack(left), unpack(right))
    }

    fn homogeneous(&self) -> Vec<[f64; 4]> {
        self.points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let w = self.weights.as_ref().map_or(1.0, |w| w[i]);
                [p.x * w, p.y * w, p.z * w, w]
            })
            .collect()
    }

    /// Parametric derivatives `[C, C', ..., C^(k)]` at `t` via hodographs.
    pub fn derivatives(&self, t: f64, max_order: usize) -> Vec<Vec3> {
        let hom = self.homogeneous();
        let n = self.degree();
        let mut hom_ders = Vec::with_capacity(max_order + 1);
        let mut diffs = hom;
        let mut factor = 1.0;
        for k in 0..=max_order {
            if k > 0 {
                if k > n {
                    hom_ders.push([0.0; 4]);
                    continue;
                }
                for i in 0..diffs.len() - 1 {
                    for c in 0..4 {
                        diffs[i][c] = diffs[i + 1][c] - diffs[i][c];
                    }
                }
                diffs.pop();
                factor *= (n + 1 - k) as f64;
            }
            let v = de_casteljau(&diffs, t);
            hom_ders.push([v[0] * factor, v[1] * factor, v[2] * factor, v[3] * factor]);
        }
        if self.weights.is_none() {
            return hom_ders.iter().map(|h| Vec3::new(h[0], h[1], h[2])).collect();
        }
        rational_derivatives(&hom_ders)
    }
}

fn de_casteljau(points: &[[f64; 4]], t: f64) -> [f64; 4] {
    let mut work = points.to_vec();
    let n = work.len();
    for level in 1..n {
        for i in 0..n - level {
            for c in 0..4 {
                work[i][c] += t * (work[i + 1][c] - work[i][c]);
            }
        }
    }
    work[0]
}
