//! Triangle meshes of ruled surfaces over a `(u, v)` rectangle.

use nalgebra::Vector3;

use crate::curve::uniform_grid;
use crate::surface::{evaluate_surface, RuledSurface};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    /// Vertex `iu * nv + iv` sits at `(u[iu], v[iv])`.
    pub vertices: Vec<Vector3<f64>>,
    /// Zero-based vertex indices, counter-clockwise in `(u, v)`.
    pub triangles: Vec<[usize; 3]>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl Mesh {
    pub fn nu(&self) -> usize {
        self.u.len()
    }

    pub fn nv(&self) -> usize {
        self.v.len()
    }
}

/// Samples `r(u, v)` on `nu × nv` uniform nodes of `domain × [v_min, v_max]`
/// and splits each grid cell into two triangles.
pub fn mesh_surface(n: &RuledSurface, v_min: f64, v_max: f64, nu: usize, nv: usize) -> Result<Mesh> {
    if nu < 2 || nv < 2 {
        return Err(Error::InvalidArgument(format!("mesh needs nu, nv >= 2, got {nu} x {nv}")));
    }
    if !(v_min.is_finite() && v_max.is_finite() && v_min < v_max) {
        return Err(Error::InvalidArgument(format!("invalid v range [{v_min}, {v_max}]")));
    }
    let u = uniform_grid(n.domain(), nu);
    let v = uniform_grid((v_min, v_max), nv);
    let vertices = n
        .execution()
        .try_map(nu * nv, |k| evaluate_surface(n, u[k / nv], v[k % nv]))?;
    let mut triangles = Vec::with_capacity(2 * (nu - 1) * (nv - 1));
    for i in 0..nu - 1 {
        for j in 0..nv - 1 {
            let a = i * nv + j;
            let (b, c, d) = (a + nv, a + nv + 1, a + 1);
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    Ok(Mesh { vertices, triangles, u, v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn counts_and_reconstruction() {
        let n = presets::similar_helicoid();
        let m = mesh_surface(&n, -2.0, 2.0, 64, 16).unwrap();
        assert_eq!(m.vertices.len(), 1024);
        assert_eq!(m.triangles.len(), 1890);
        for (k, p) in m.vertices.iter().enumerate() {
            let (u, v) = (m.u[k / 16], m.v[k % 16]);
            let t = u / 2f64.sqrt();
            let expect = Vector3::new(-t.sin() + v * t.cos(), t.cos() + v * t.sin(), t);
            assert!((p - expect).norm() < 1e-12);
        }
        assert!(m.triangles.iter().flatten().all(|&i| i < 1024));
    }

    #[test]
    fn rejects_degenerate_grid() {
        assert!(mesh_surface(&presets::helicoid(), -1.0, 1.0, 8, 1).is_err());
        assert!(mesh_surface(&presets::helicoid(), 1.0, 1.0, 8, 8).is_err());
    }
}
