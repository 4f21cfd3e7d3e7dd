use super::{Curve, Dim, GeomError, ParametricCurve, Side, Vec3};

/// Concatenation of curves; segment `i` occupies `[offsets[i], offsets[i + 1]]`
/// of the global parameter, preserving each segment's own parameter speed.
#[derive(Clone, Debug)]
pub struct PiecewiseCurve {
    segments: Vec<Curve>,
    offsets: Vec<f64>,
}

impl PiecewiseCurve {
    /// Joins `segments`, checking that consecutive endpoints coincide within
    /// `join_tolerance` model units.
    pub fn new(segments: Vec<Curve>, join_tolerance: f64) -> Result<Self, GeomError> {
        let first = segments
            .first()
            .ok_or_else(|| GeomError::DegenerateControlData("piecewise curve has no segments".into()))?;
        let dim = first.dim();
        if let Some(i) = segments.iter().position(|s| s.dim() != dim) {
            return Err(GeomError::DimensionMismatch(format!(
                "segment {i} is {}D but segment 0 is {}D",
                segments[i].dim().count(),
                dim.count()
            )));
        }
        for (i, w) in segments.windows(2).enumerate() {
            let end = w[0].end_point()?;
            let start = w[1].start_point()?;
            let gap = end.distance(start);
            if !(gap <= join_tolerance) {
                return Err(GeomError::InvalidJoint { index: i, gap, tolerance: join_tolerance });
            }
        }
        let mut offsets = Vec::with_capacity(segments.len() + 1);
        let mut acc = first.domain().0;
        offsets.push(acc);
        for s in &segments {
            let (lo, hi) = s.domain();
            acc += hi - lo;
            offsets.push(acc);
        }
        Ok(PiecewiseCurve { segments, offsets })
    }

    pub fn segments(&self) -> &[Curve] {
        &self.segments
    }

    pub fn dim(&self) -> Dim {
        self.segments[0].dim()
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.offsets[0], *self.offsets.last().unwrap())
    }

    /// Global parameters of the joints between segments, then of the segments'
    /// own interior breakpoints, sorted.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                out.push(self.offsets[i]);
            }
            let lo = s.domain().0;
            out.extend(s.breakpoints().into_iter().map(|b| b - lo + self.offsets[i]));
        }
        out.sort_by(f64::total_cmp);
        out
    }

    pub(crate) fn locate(&self, t: f64, side: Side) -> (usize, f64) {
        let n = self.segments.len();
        let idx = match side {
            Side::Right => (0..n).rev().find(|&i| self.offsets[i] <= t).unwrap_or(0),
            Side::Left => (0..n).find(|&i| t <= self.offsets[i + 1]).unwrap_or(n - 1),
        };
        let local = t - self.offsets[idx] + self.segments[idx].domain().0;
        (idx, local)
    }

    pub fn derivatives(&self, t: f64, max_order: usize, side: Side) -> Result<Vec<Vec3>, GeomError> {
        let (i, local) = self.locate(t, side);
        let seg = &self.segments[i];
        let (lo, hi) = seg.domain();
        seg.derivatives_at(local.clamp(lo, hi), max_order, side)
    }

    pub(crate) fn map_segments(&self, f: impl Fn(&Curve) -> Curve) -> Self {
        PiecewiseCurve { segments: self.segments.iter().map(f).collect(), offsets: self.offsets.clone() }
    }

    pub(crate) fn reversed(&self) -> Self {
        let segments: Vec<Curve> = self.segments.iter().rev().map(|s| s.reversed()).collect();
        let mut offsets = Vec::with_capacity(segments.len() + 1);
        let mut acc = self.offsets[0];
        offsets.push(acc);
        for s in &segments {
            let (lo, hi) = s.domain();
            acc += hi - lo;
            offsets.push(acc);
        }
        PiecewiseCurve { segments, offsets }
    }
}
