use super::{rational_derivatives, GeomError, Side, Vec3};

/// A (non-uniform, optionally rational) B-spline curve.
#[derive(Clone, Debug, PartialEq)]
pub struct BSplineCurve {
    degree: usize,
    knots: Vec<f64>,
    points: Vec<Vec3>,
    weights: Option<Vec<f64>>,
}

impl BSplineCurve {
    pub fn new(
        degree: usize,
        knots: Vec<f64>,
        points: Vec<Vec3>,
        weights: Option<Vec<f64>>,
    ) -> Result<Self, GeomError> {
        if degree == 0 {
            return Err(GeomError::DegenerateControlData("B-spline degree must be at least 1".into()));
        }
        if points.len() < degree + 1 {
            return Err(GeomError::DegenerateControlData(format!(
                "degree {degree} needs at least {} control points, got {}",
                degree + 1,
                points.len()
            )));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(GeomError::DegenerateControlData(format!("control point {i} is not finite")));
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
        let expected = points.len() + degree + 1;
        if knots.len() != expected {
            return Err(GeomError::InvalidKnots(format!(
                "expected {expected} knots for {} control points of degree {degree}, got {}",
                points.len(),
                knots.len()
            )));
        }
        if knots.iter().any(|k| !k.is_finite()) {
            return Err(GeomError::InvalidKnots("knot values must be finite".into()));
        }
        if let Some(i) = knots.windows(2).position(|w| w[1] < w[0]) {
            return Err(GeomError::InvalidKnots(format!(
                "knot vector decreases at index {}: {} > {}",
                i + 1,
                knots[i],
                knots[i + 1]
            )));
        }
        let n = points.len();
        let (lo, hi) = (knots[degree], knots[n]);
        if lo >= hi {
            return Err(GeomError::InvalidKnots("parameter domain is empty".into()));
        }
        // interior multiplicity above the degree would break the curve apart
        let mut i = 0;
        while i < knots.len() {
            let mut j = i;
            while j + 1 < knots.len() && knots[j + 1] == knots[i] {
                j += 1;
            }
            let mult = j - i + 1;
            let interior = knots[i] > lo && knots[i] < hi;
            if (interior && mult > degree) || mult > degree + 1 {
                return Err(GeomError::InvalidKnots(format!(
                    "knot {} has multiplicity {mult}, too high for degree {degree}",
                    knots[i]
                )));
            }
            i = j + 1;
        }
        Ok(BSplineCurve { degree, knots, points, weights })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[self.degree], self.knots[self.points.len()])
    }

    /// Distinct knot values strictly inside the domain.
    pub fn breakpoints(&self) -> Vec<f64> {
        let (lo, hi) = self.domain();
        let mut out: Vec<f64> = Vec::new();
        for &k in &self.knots {
            if k > lo && k < hi && out.last() != Some(&k) {
                out.push(k);
            }
        }
        out
    }

    pub(crate) fn map_points(&self, f: impl Fn(Vec3) -> Vec3) -> Self {
        BSplineCurve {
            degree: self.degree,
            knots: self.knots.clone(),
            points: self.points.iter().map(|&p| f(p)).collect(),
            weights: self.weights.clone(),
        }
    }

    pub(crate) fn reversed(&self) -> Self {
        let (lo, hi) = self.domain();
        let knots = self.knots.iter().rev().map(|k| lo + hi - k).collect();
        let mut points = self.points.clone();
        points.reverse();
        let weights = self.weights.as_ref().map(|w| w.iter().rev().copied().collect());
        BSplineCurve { degree: self.degree, knots, points, weights }
    }

    fn find_span(&self, t: f64, side: Side) -> usize {
        let p = self.degree;
        let n = self.points.len();
        let u = &self.knots;
        match side {
            Side::Right => {
                if t >= u[n] {
                    return (p..n).rev().find(|&i| u[i] < u[i + 1]).unwrap_or(n - 1);
                }
                (p..n).rev().find(|&i| u[i] <= t && u[i] < u[i + 1]).unwrap_or(p)
            }
            Side::Left => {
                if t <= u[p] {
                    return (p..n).find(|&i| u[i] < u[i + 1]).unwrap_or(p);
                }
                (p..n).find(|&i| t <= u[i + 1] && u[i] < u[i + 1]).unwrap_or(n - 1)
            }
        }
    }

    /// Basis function derivatives on `span`; `ders[k][j]` is the k-th derivative
    /// of basis `span - p + j`.
    fn basis_derivatives(&self, span: usize, t: f64, max_order: usize) -> Vec<Vec<f64>> {
        let p = self.degree;
        let u = &self.knots;
        let mut ndu = vec![vec![0.0; p + 1]; p + 1];
        let mut left = vec![0.0; p + 1];
        let mut right = vec![0.0; p + 1];
        ndu[0][0] = 1.0;
        for j in 1..=p {
            left[j] = t - u[span + 1 - j];
            right[j] = u[span + j] - t;
            let mut saved = 0.0;
            for r in 0..j {
                ndu[j][r] = right[r + 1] + left[j - r];
                let temp = ndu[r][j - 1] / ndu[j][r];
                ndu[r][j] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            ndu[j][j] = saved;
        }
        let nd = max_order.min(p);
        let mut ders = vec![vec![0.0; p + 1]; max_order + 1];
        for j in 0..=p {
            ders[0][j] = ndu[j][p];
        }
        let mut a = vec![vec![0.0; p + 1]; 2];
        for r in 0..=p {
            let (mut s1, mut s2) = (0usize, 1usize);
            a[0][0] = 1.0;
            for k in 1..=nd {
                let mut d = 0.0;
                let rk = r as isize - k as isize;
                let pk = p - k;
                if r >= k {
                    a[s2][0] = a[s1][0] / ndu[pk + 1][rk as usize];
                    d = a[s2][0] * ndu[rk as usize][pk];
                }
                let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
                let j2 = if (r as isize - 1) <= pk as isize { k - 1 } else { p - r };
                for j in j1..=j2 {
                    let idx = (rk + j as isize) as usize;
                    a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][idx];
                    d += a[s2][j] * ndu[idx][pk];
                }
                if r <= pk {
                    a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                    d += a[s2][k] * ndu[r][pk];
                }
                ders[k][r] = d;
                std::mem::swap(&mut s1, &mut s2);
            }
        }
        let mut factor = p as f64;
        for k in 1..=nd {
            for j in 0..=p {
                ders[k][j] *= factor;
            }
            factor *= (p - k) as f64;
        }
        ders
    }

    /// Parametric derivatives `[C, C', ..., C^(k)]`, taken from the knot span on `side`.
    pub fn derivatives(&self, t: f64, max_order: usize, side: Side) -> Vec<Vec3> {
        let span = self.find_span(t, side);
        let basis = self.basis_derivatives(span, t, max_order);
        let p = self.degree;
        let mut hom = vec![[0.0; 4]; max_order + 1];
        for (k, row) in basis.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                let idx = span - p + j;
                let w = self.weights.as_ref().map_or(1.0, |w| w[idx]);
                let q = self.points[idx];
                hom[k][0] += b * q.x * w;
                hom[k][1] += b * q.y * w;
                hom[k][2] += b * q.z * w;
                hom[k][3] += b * w;
            }
        }
        if self.weights.is_none() {
            return hom.iter().map(|h| Vec3::new(h[0], h[1], h[2])).collect();
        }
        rational_derivatives(&hom)
    }
}
