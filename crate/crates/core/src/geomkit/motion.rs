//! Proper rigid motions of R³ and least-squares point-cloud alignment.

use nalgebra::{Matrix3, Vector3};

use super::GeomError;

/// Orientation-preserving rigid motion x ↦ R·x + τ.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidMotion {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

impl RigidMotion {
    pub fn identity() -> Self {
        RigidMotion {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    pub fn new(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Result<Self, GeomError> {
        let ortho = (rotation * rotation.transpose() - Matrix3::identity()).norm();
        if ortho > 1e-12 || (rotation.determinant() - 1.0).abs() > 1e-10 {
            return Err(GeomError::NotARotation(ortho));
        }
        Ok(RigidMotion {
            rotation,
            translation,
        })
    }

    /// Rotation by `angle` about the (normalized) `axis` through the origin.
    pub fn rotation_about(axis: Vector3<f64>, angle: f64) -> Self {
        let axis = nalgebra::Unit::new_normalize(axis);
        RigidMotion {
            rotation: nalgebra::Rotation3::from_axis_angle(&axis, angle).into_inner(),
            translation: Vector3::zeros(),
        }
    }

    pub fn apply(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * p + self.translation
    }

    /// self ∘ other: apply `other` first.
    pub fn compose(&self, other: &RigidMotion) -> RigidMotion {
        RigidMotion {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> RigidMotion {
        let rt = self.rotation.transpose();
        RigidMotion {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    pub fn powi(&self, n: usize) -> RigidMotion {
        let mut out = RigidMotion::identity();
        for _ in 0..n {
            out = self.compose(&out);
        }
        out
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        (self.rotation - Matrix3::identity()).norm() < tol && self.translation.norm() < tol
    }

    /// Rotation angle in [0, π].
    pub fn angle(&self) -> f64 {
        let c = ((self.rotation.trace() - 1.0) / 2.0).clamp(-1.0, 1.0);
        c.acos()
    }

    /// Unit rotation axis; `None` when the rotation is (numerically) the
    /// identity. Uses the symmetric eigen-route near angle π where the skew
    /// part degenerates.
    pub fn axis(&self) -> Option<Vector3<f64>> {
        let angle = self.angle();
        if angle < 1e-9 {
            return None;
        }
        if angle < std::f64::consts::PI - 1e-4 {
            let r = &self.rotation;
            let v = Vector3::new(
                r[(2, 1)] - r[(1, 2)],
                r[(0, 2)] - r[(2, 0)],
                r[(1, 0)] - r[(0, 1)],
            );
            Some(v / (2.0 * angle.sin()))
        } else {
            // R ≈ 2aaᵀ - I near π
            let m = (self.rotation + Matrix3::identity()) * 0.5;
            let col = (0..3)
                .max_by(|&a, &b| {
                    m[(a, a)]
                        .partial_cmp(&m[(b, b)])
                        .expect("non-finite rotation")
                })
                .expect("3 columns");
            let v = m.column(col) / m[(col, col)].sqrt();
            Some(v.normalize())
        }
    }
}

/// Least-squares proper rigid alignment of `source` onto `target`
/// (closed form via the cross-covariance SVD). Returns the motion and the
/// RMS residual after alignment.
pub fn fit_rigid_motion(
    source: &[Vector3<f64>],
    target: &[Vector3<f64>],
) -> Result<(RigidMotion, f64), GeomError> {
    if source.len() != target.len() {
        return Err(GeomError::ShapeMismatch {
            expected: source.len(),
            got: target.len(),
        });
    }
    if source.len() < 3 {
        return Err(GeomError::DegeneratePointCloud(
            "need at least 3 points".into(),
        ));
    }
    let n = source.len() as f64;
    let cs: Vector3<f64> = source.iter().sum::<Vector3<f64>>() / n;
    let ct: Vector3<f64> = target.iter().sum::<Vector3<f64>>() / n;

    let mut h = Matrix3::<f64>::zeros();
    for (s, t) in source.iter().zip(target.iter()) {
        h += (t - ct) * (s - cs).transpose();
    }
    let svd = h.svd(true, true);
    let u = svd.u.expect("svd requested");
    let vt = svd.v_t.expect("svd requested");

    // collinear clouds leave the rotation about the line undetermined
    let smax = svd.singular_values[0];
    if svd.singular_values[1] <= 1e-12 * smax.max(1e-300) {
        return Err(GeomError::DegeneratePointCloud(
            "points are (numerically) collinear".into(),
        ));
    }

    let d = (u * vt).determinant();
    let mut s = Matrix3::identity();
    s[(2, 2)] = d.signum();
    let rotation = u * s * vt;
    let translation = ct - rotation * cs;
    let motion = RigidMotion {
        rotation,
        translation,
    };

    let mut ss = 0.0;
    for (s, t) in source.iter().zip(target.iter()) {
        ss += (motion.apply(s) - t).norm_squared();
    }
    Ok((motion, (ss / n).sqrt()))
}
