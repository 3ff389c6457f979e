//! Least-squares proper rotations between paired vector sets.

use nalgebra::{Matrix3, Rotation3, Unit, Vector3};

/// The rotation `R` (det +1) minimizing `Σ |R x_i - y_i|²`.
///
/// Uses the SVD of the cross-covariance `Σ y_i x_iᵀ` and flips the weakest
/// singular direction when the unconstrained optimum is a reflection.
pub fn proper_rotation(from: &[Vector3<f64>], to: &[Vector3<f64>]) -> Matrix3<f64> {
    assert_eq!(from.len(), to.len(), "paired sets must have equal length");
    let mut h = Matrix3::zeros();
    for (x, y) in from.iter().zip(to) {
        h += y * x.transpose();
    }
    let svd = h.svd(true, true);
    let (Some(u), Some(v_t)) = (svd.u, svd.v_t) else {
        return Matrix3::identity();
    };
    let mut d = Matrix3::identity();
    if (u * v_t).determinant() < 0.0 {
        // singular values come sorted in decreasing order
        d[(2, 2)] = -1.0;
    }
    orthonormalize(u * d * v_t)
}

/// A rotation taking unit vector `a` to unit vector `b`.
pub fn rotation_between(a: &Vector3<f64>, b: &Vector3<f64>) -> Matrix3<f64> {
    if let Some(r) = Rotation3::rotation_between(a, b) {
        return r.into_inner();
    }
    // antiparallel: half turn about any axis perpendicular to a
    let helper = if a.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let axis = Unit::new_normalize(a.cross(&helper));
    Rotation3::from_axis_angle(&axis, std::f64::consts::PI).into_inner()
}

/// Deviation of `r` from a proper rotation: `max(|RᵀR - I|, |det R - 1|)`.
pub fn rotation_defect(r: &Matrix3<f64>) -> f64 {
    let gram = (r.transpose() * r - Matrix3::identity()).abs().max();
    gram.max((r.determinant() - 1.0).abs())
}

/// Removes rounding drift by one polar-decomposition (SVD) projection.
fn orthonormalize(r: Matrix3<f64>) -> Matrix3<f64> {
    let svd = r.svd(true, true);
    match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => u * v_t,
        _ => r,
    }
}
