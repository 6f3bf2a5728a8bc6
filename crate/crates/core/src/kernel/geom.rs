//! Small fixed-size vector/transform types shared by the kernel.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product of two planar vectors.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    pub fn normalize(self) -> Vec2 {
        let n = self.norm();
        Vec2::new(self.x / n, self.y / n)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Counterclockwise rotation by 90 degrees.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dist(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    pub fn normalize(self) -> Vec3 {
        let n = self.norm();
        Vec3::new(self.x / n, self.y / n, self.z / n)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Axis-aligned 2D viewport in world coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window2 {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Window2 {
    /// Panics if the window is empty; callers validate user input first.
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Self {
        assert!(xmin < xmax && ymin < ymax, "empty window");
        Window2 { xmin, xmax, ymin, ymax }
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.xmin && p.x <= self.xmax && p.y >= self.ymin && p.y <= self.ymax
    }
}

impl Default for Window2 {
    fn default() -> Self {
        Window2::new(-5.0, 5.0, -5.0, 5.0)
    }
}

/// Minimum spacing between consecutive polyline vertices.
pub const MIN_VERTEX_GAP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polyline2 {
    pub pts: Vec<Vec2>,
    pub closed: bool,
}

impl Polyline2 {
    pub fn new(pts: Vec<Vec2>, closed: bool) -> Self {
        Polyline2 { pts, closed }
    }

    /// Appends a vertex, dropping it if it coincides with the previous one.
    pub fn push(&mut self, p: Vec2) {
        if let Some(last) = self.pts.last() {
            if last.dist(p) < MIN_VERTEX_GAP {
                return;
            }
        }
        self.pts.push(p);
    }

    pub fn arc_length(&self) -> f64 {
        let mut total = 0.0;
        for w in self.pts.windows(2) {
            total += w[0].dist(w[1]);
        }
        if self.closed && self.pts.len() > 1 {
            total += self.pts[self.pts.len() - 1].dist(self.pts[0]);
        }
        total
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polyline3 {
    pub pts: Vec<Vec3>,
    pub closed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeshFace {
    Quad([u32; 4]),
    Tri([u32; 3]),
}

impl MeshFace {
    pub fn indices(&self) -> &[u32] {
        match self {
            MeshFace::Quad(q) => q,
            MeshFace::Tri(t) => t,
        }
    }
}

/// Discretized surface: vertices plus quad/triangle faces.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Mesh {
    pub vertices: Vec<Vec3>,
    pub faces: Vec<MeshFace>,
    /// Parameter-space coordinates per vertex, when the mesh came from a
    /// parametric sampling.
    pub uv: Option<Vec<(f64, f64)>>,
}

impl Mesh {
    pub fn face_area(&self, face: &MeshFace) -> f64 {
        let idx = face.indices();
        let mut area = 0.0;
        // fan triangulation from the first vertex
        for i in 1..idx.len() - 1 {
            let a = self.vertices[idx[0] as usize];
            let b = self.vertices[idx[i] as usize];
            let c = self.vertices[idx[i + 1] as usize];
            area += (b - a).cross(c - a).norm() * 0.5;
        }
        area
    }
}

/// Proper rigid motion: orthonormal rotation (det +1) plus translation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidTransform {
    pub rot: [[f64; 3]; 3],
    pub trans: Vec3,
}

impl RigidTransform {
    pub fn identity() -> Self {
        RigidTransform {
            rot: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            trans: Vec3::default(),
        }
    }

    pub fn apply(&self, p: Vec3) -> Vec3 {
        let r = &self.rot;
        Vec3::new(
            r[0][0] * p.x + r[0][1] * p.y + r[0][2] * p.z + self.trans.x,
            r[1][0] * p.x + r[1][1] * p.y + r[1][2] * p.z + self.trans.y,
            r[2][0] * p.x + r[2][1] * p.y + r[2][2] * p.z + self.trans.z,
        )
    }

    /// self ∘ other (apply `other` first).
    pub fn compose(&self, other: &RigidTransform) -> RigidTransform {
        let mut rot = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                rot[i][j] = (0..3).map(|k| self.rot[i][k] * other.rot[k][j]).sum();
            }
        }
        let t = self.apply(other.trans);
        RigidTransform { rot, trans: t }
    }

    /// Rotation by `angle` about the oriented line through `a` and `b`.
    pub fn about_line(a: Vec3, b: Vec3, angle: f64) -> RigidTransform {
        let axis = (b - a).normalize();
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        let (ux, uy, uz) = (axis.x, axis.y, axis.z);
        let rot = [
            [c + ux * ux * t, ux * uy * t - uz * s, ux * uz * t + uy * s],
            [uy * ux * t + uz * s, c + uy * uy * t, uy * uz * t - ux * s],
            [uz * ux * t - uy * s, uz * uy * t + ux * s, c + uz * uz * t],
        ];
        // translate a to origin, rotate, translate back
        let ra = Vec3::new(
            rot[0][0] * a.x + rot[0][1] * a.y + rot[0][2] * a.z,
            rot[1][0] * a.x + rot[1][1] * a.y + rot[1][2] * a.z,
            rot[2][0] * a.x + rot[2][1] * a.y + rot[2][2] * a.z,
        );
        RigidTransform { rot, trans: a - ra }
    }

    /// Max deviation of R·Rᵀ from the identity, for validity checks.
    pub fn orthonormality_error(&self) -> f64 {
        let r = &self.rot;
        let mut err: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| r[i][k] * r[j][k]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                err = err.max((dot - want).abs());
            }
        }
        err
    }

    pub fn determinant(&self) -> f64 {
        let r = &self.rot;
        r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
    }
}

/// Planar isometry used to carry reflections of curves exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Iso2 {
    // row-major 2x2 linear part
    pub m: [[f64; 2]; 2],
    pub t: Vec2,
}

impl Iso2 {
    pub fn apply(&self, p: Vec2) -> Vec2 {
        Vec2::new(
            self.m[0][0] * p.x + self.m[0][1] * p.y + self.t.x,
            self.m[1][0] * p.x + self.m[1][1] * p.y + self.t.y,
        )
    }

    /// Reflection across the line through `p` with direction `d`.
    pub fn reflection(p: Vec2, d: Vec2) -> Iso2 {
        let u = d.normalize();
        let m = [
            [u.x * u.x - u.y * u.y, 2.0 * u.x * u.y],
            [2.0 * u.x * u.y, u.y * u.y - u.x * u.x],
        ];
        // t = p - M p
        let mp = Vec2::new(m[0][0] * p.x + m[0][1] * p.y, m[1][0] * p.x + m[1][1] * p.y);
        Iso2 { m, t: p - mp }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_about_line_fixes_axis_points() {
        let a = Vec3::new(1.0, 2.0, 3.0);
        let b = Vec3::new(4.0, -1.0, 2.0);
        let r = RigidTransform::about_line(a, b, 1.234);
        assert!(r.apply(a).dist(a) < 1e-12);
        assert!(r.apply(b).dist(b) < 1e-12);
        assert!(r.orthonormality_error() < 1e-12);
        assert!((r.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn compose_applies_right_to_left() {
        let r1 = RigidTransform::about_line(Vec3::default(), Vec3::new(0.0, 0.0, 1.0), 0.7);
        let r2 = RigidTransform::about_line(Vec3::new(1.0, 0.0, 0.0), Vec3::new(1.0, 1.0, 0.0), 0.3);
        let p = Vec3::new(0.2, 0.4, 0.6);
        let both = r2.compose(&r1);
        assert!(both.apply(p).dist(r2.apply(r1.apply(p))) < 1e-12);
    }

    #[test]
    fn reflection_is_involutive() {
        let iso = Iso2::reflection(Vec2::new(3.0, 0.0), Vec2::new(0.0, 1.0));
        let p = Vec2::new(1.0, 2.0);
        let q = iso.apply(p);
        assert!((q.x - 5.0).abs() < 1e-12 && (q.y - 2.0).abs() < 1e-12);
        assert!(iso.apply(q).dist(p) < 1e-12);
    }

    #[test]
    fn polyline_drops_coincident_vertices() {
        let mut pl = Polyline2::default();
        pl.push(Vec2::new(0.0, 0.0));
        pl.push(Vec2::new(0.0, 0.0));
        pl.push(Vec2::new(1.0, 0.0));
        assert_eq!(pl.pts.len(), 2);
    }
}
