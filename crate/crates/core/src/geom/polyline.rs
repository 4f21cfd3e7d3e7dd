use super::{GeomError, Side, Vec3};

/// Polygonal chain; vertex `i` sits at parameter `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyline {
    points: Vec<Vec3>,
}

impl Polyline {
    pub fn new(points: Vec<Vec3>) -> Result<Self, GeomError> {
        if points.len() < 2 {
            return Err(GeomError::DegenerateControlData(format!(
                "a polyline needs at least 2 vertices, got {}",
                points.len()
            )));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(GeomError::DegenerateControlData(format!("vertex {i} is not finite")));
        }
        Ok(Polyline { points })
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn domain(&self) -> (f64, f64) {
        (0.0, (self.points.len() - 1) as f64)
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        (1..self.points.len() - 1).map(|i| i as f64).collect()
    }

    pub fn length(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].distance(w[1])).sum()
    }

    pub(crate) fn map_points(&self, f: impl Fn(Vec3) -> Vec3) -> Self {
        Polyline { points: self.points.iter().map(|&p| f(p)).collect() }
    }

    pub(crate) fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Polyline { points }
    }

    pub fn derivatives(&self, t: f64, max_order: usize, side: Side) -> Vec<Vec3> {
        let last = self.points.len() - 2;
        let i = match side {
            Side::Right => (t.floor().max(0.0) as usize).min(last),
            Side::Left => ((t.ceil() as isize - 1).max(0) as usize).min(last),
        };
        let (a, b) = (self.points[i], self.points[i + 1]);
        let mut out = vec![Vec3::ZERO; max_order + 1];
        out[0] = a.lerp(b, t - i as f64);
        if max_order >= 1 {
            out[1] = b - a;
        }
        out
    }
}
