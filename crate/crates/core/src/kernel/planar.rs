//! In-plane 2D views of planar 3D polygons.

use thiserror::Error;

use super::geom::{Vec2, Vec3};

const COPLANAR_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum PlanarError {
    #[error("need at least 3 points")]
    TooFewPoints,
    #[error("points are not coplanar (deviation {0:.3e})")]
    NotCoplanar(f64),
}

/// Maps coplanar 3D points to 2D coordinates in an orthonormal in-plane
/// basis: first axis along the first edge, second axis = normal × first.
/// Distances and angles are preserved exactly.
pub fn plane_view_basis(points: &[Vec3]) -> Result<Vec<Vec2>, PlanarError> {
    if points.len() < 3 {
        return Err(PlanarError::TooFewPoints);
    }
    // Newell's method for a robust polygon normal
    let mut normal = Vec3::default();
    for i in 0..points.len() {
        let p = points[i];
        let q = points[(i + 1) % points.len()];
        normal.x += (p.y - q.y) * (p.z + q.z);
        normal.y += (p.z - q.z) * (p.x + q.x);
        normal.z += (p.x - q.x) * (p.y + q.y);
    }
    let n = normal.normalize();
    let origin = points[0];
    let mut worst = 0.0f64;
    for p in points {
        worst = worst.max(((*p - origin).dot(n)).abs());
    }
    if worst > COPLANAR_TOL {
        return Err(PlanarError::NotCoplanar(worst));
    }
    let ex = (points[1] - origin).normalize();
    let ey = n.cross(ex);
    Ok(points
        .iter()
        .map(|p| {
            let d = *p - origin;
            Vec2::new(d.dot(ex), d.dot(ey))
        })
        .collect())
}

/// Signed shoelace area of a 2D polygon.
pub fn polygon_area2(points: &[Vec2]) -> f64 {
    let mut s = 0.0;
    for i in 0..points.len() {
        let p = points[i];
        let q = points[(i + 1) % points.len()];
        s += p.cross(q);
    }
    s * 0.5
}
