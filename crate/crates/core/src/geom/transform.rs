use super::{Dim, GeomError, Vec3};

/// Rotation, uniform scale and translation: `p -> scale * R p + translation`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimilarityTransform {
    rotation: [[f64; 3]; 3],
    translation: Vec3,
    scale: f64,
    dim: Dim,
}

impl SimilarityTransform {
    pub fn identity(dim: Dim) -> Self {
        SimilarityTransform {
            rotation: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            translation: Vec3::ZERO,
            scale: 1.0,
            dim,
        }
    }

    /// In-plane similarity: rotation by `angle` about the z axis.
    pub fn planar(angle: f64, translation: (f64, f64), scale: f64) -> Result<Self, GeomError> {
        check_scale(scale)?;
        let (s, c) = angle.sin_cos();
        if !(angle.is_finite() && translation.0.is_finite() && translation.1.is_finite()) {
            return Err(GeomError::InvalidTransform("non-finite planar transform".into()));
        }
        Ok(SimilarityTransform {
            rotation: [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]],
            translation: Vec3::xy(translation.0, translation.1),
            scale,
            dim: Dim::Two,
        })
    }

    /// Spatial similarity; `rotation` must be orthonormal with determinant +1.
    pub fn spatial(rotation: [[f64; 3]; 3], translation: Vec3, scale: f64) -> Result<Self, GeomError> {
        check_scale(scale)?;
        let r = rotation;
        for i in 0..3 {
            for j in 0..3 {
                let d: f64 = (0..3).map(|k| r[k][i] * r[k][j]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                if (d - expect).abs() > 1e-10 {
                    return Err(GeomError::InvalidTransform("rotation is not orthonormal".into()));
                }
            }
        }
        let det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
        if (det - 1.0).abs() > 1e-10 {
            return Err(GeomError::InvalidTransform("rotation determinant must be +1".into()));
        }
        if !translation.is_finite() {
            return Err(GeomError::InvalidTransform("non-finite translation".into()));
        }
        Ok(SimilarityTransform { rotation, translation, scale, dim: Dim::Three })
    }

    /// Rotation about a unit `axis` by `angle` (Rodrigues).
    pub fn axis_angle(axis: Vec3, angle: f64, translation: Vec3, scale: f64) -> Result<Self, GeomError> {
        let k = axis
            .normalize()
            .ok_or_else(|| GeomError::InvalidTransform("rotation axis has zero length".into()))?;
        let (s, c) = angle.sin_cos();
        let v = 1.0 - c;
        let rotation = [
            [c + k.x * k.x * v, k.x * k.y * v - k.z * s, k.x * k.z * v + k.y * s],
            [k.y * k.x * v + k.z * s, c + k.y * k.y * v, k.y * k.z * v - k.x * s],
            [k.z * k.x * v - k.y * s, k.z * k.y * v + k.x * s, c + k.z * k.z * v],
        ];
        Self::spatial(rotation, translation, scale)
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn rotate(&self, v: Vec3) -> Vec3 {
        let r = &self.rotation;
        Vec3::new(
            r[0][0] * v.x + r[0][1] * v.y + r[0][2] * v.z,
            r[1][0] * v.x + r[1][1] * v.y + r[1][2] * v.z,
            r[2][0] * v.x + r[2][1] * v.y + r[2][2] * v.z,
        )
    }

    pub fn apply_point(&self, p: Vec3) -> Vec3 {
        self.rotate(p) * self.scale + self.translation
    }

    pub fn apply_vector(&self, v: Vec3) -> Vec3 {
        self.rotate(v) * self.scale
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &SimilarityTransform) -> SimilarityTransform {
        let mut rotation = [[0.0; 3]; 3];
        for (i, row) in rotation.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.rotation[i][k] * first.rotation[k][j]).sum();
            }
        }
        SimilarityTransform {
            rotation,
            translation: self.apply_point(first.translation),
            scale: self.scale * first.scale,
            dim: if self.dim == Dim::Three || first.dim == Dim::Three { Dim::Three } else { Dim::Two },
        }
    }

    /// Rotation angle about z for planar transforms.
    pub fn planar_angle(&self) -> f64 {
        self.rotation[1][0].atan2(self.rotation[0][0])
    }
}

fn check_scale(scale: f64) -> Result<(), GeomError> {
    if scale.is_finite() && scale > 0.0 {
        Ok(())
    } else {
        Err(GeomError::InvalidTransform(format!("scale must be positive, got {scale}")))
    }
}
