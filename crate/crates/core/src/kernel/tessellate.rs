//! Parametric-surface tessellation into quad meshes.

use super::geom::{Mesh, MeshFace, Vec3};

const WELD_TOL: f64 = 1e-9;
const DEGENERATE_AREA: f64 = 1e-18;

/// Samples `s` on a uniform (nu+1)×(nv+1) parameter grid and emits nu×nv
/// quads. Quads with any non-finite corner are culled, zero-area quads are
/// dropped, and closed seams (first and last iso-line coinciding within
/// 1e-9) are welded so revolution surfaces close up.
pub fn tessellate_surface(
    s: &dyn Fn(f64, f64) -> Option<Vec3>,
    u_range: (f64, f64),
    v_range: (f64, f64),
    nu: usize,
    nv: usize,
) -> Mesh {
    assert!(nu >= 2 && nv >= 2, "tessellation grid must be at least 2x2");
    let du = (u_range.1 - u_range.0) / nu as f64;
    let dv = (v_range.1 - v_range.0) / nv as f64;
    let grid_pt = |i: usize, j: usize| {
        let u = u_range.0 + i as f64 * du;
        let v = v_range.0 + j as f64 * dv;
        (u, v)
    };

    let mut grid: Vec<Option<Vec3>> = Vec::with_capacity((nu + 1) * (nv + 1));
    for j in 0..=nv {
        for i in 0..=nu {
            let (u, v) = grid_pt(i, j);
            grid.push(s(u, v).filter(|p| p.is_finite()));
        }
    }
    let at = |i: usize, j: usize| grid[j * (nu + 1) + i];

    // seam detection: u-seam welds column nu onto column 0, v-seam welds
    // row nv onto row 0
    let weld_u = (0..=nv).all(|j| match (at(0, j), at(nu, j)) {
        (Some(a), Some(b)) => a.dist(b) <= WELD_TOL,
        _ => false,
    });
    let weld_v = (0..=nu).all(|i| match (at(i, 0), at(i, nv)) {
        (Some(a), Some(b)) => a.dist(b) <= WELD_TOL,
        _ => false,
    });

    let owned_cols = if weld_u { nu } else { nu + 1 };
    let owned_rows = if weld_v { nv } else { nv + 1 };

    let mut mesh = Mesh::default();
    let mut uv = Vec::new();
    let mut index = vec![u32::MAX; (nu + 1) * (nv + 1)];
    for j in 0..owned_rows {
        for i in 0..owned_cols {
            if let Some(p) = at(i, j) {
                index[j * (nu + 1) + i] = mesh.vertices.len() as u32;
                mesh.vertices.push(p);
                let (u, v) = grid_pt(i, j);
                uv.push((u, v));
            }
        }
    }
    let resolve = |i: usize, j: usize| {
        let i = if weld_u && i == nu { 0 } else { i };
        let j = if weld_v && j == nv { 0 } else { j };
        index[j * (nu + 1) + i]
    };

    for j in 0..nv {
        for i in 0..nu {
            let ids = [
                resolve(i, j),
                resolve(i + 1, j),
                resolve(i + 1, j + 1),
                resolve(i, j + 1),
            ];
            if ids.iter().any(|&id| id == u32::MAX) {
                continue;
            }
            let quad = MeshFace::Quad(ids);
            if mesh.face_area(&quad) < DEGENERATE_AREA {
                continue;
            }
            mesh.faces.push(quad);
        }
    }
    mesh.uv = Some(uv);
    mesh
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;
    use std::f64::consts::PI;

    #[test]
    fn two_by_two_patch_counts() {
        let s = |u: f64, v: f64| Some(Vec3::new(u, v, u + v));
        let mesh = tessellate_surface(&s, (0.0, 1.0), (0.0, 1.0), 2, 2);
        assert_eq!(mesh.vertices.len(), 9);
        assert_eq!(mesh.faces.len(), 4);
    }

    #[test]
    fn torus_welds_both_seams() {
        let (nu, nv) = (24, 16);
        let torus = |u: f64, v: f64| {
            let r_major = 2.0;
            let r_minor = 0.5;
            Some(Vec3::new(
                (r_major + r_minor * v.cos()) * u.cos(),
                (r_major + r_minor * v.cos()) * u.sin(),
                r_minor * v.sin(),
            ))
        };
        let mesh = tessellate_surface(&torus, (0.0, 2.0 * PI), (0.0, 2.0 * PI), nu, nv);
        assert_eq!(mesh.vertices.len(), nu * nv);
        assert_eq!(mesh.faces.len(), nu * nv);
        // Euler characteristic of the closed quad torus is 0
        let mut edges = BTreeSet::new();
        for f in &mesh.faces {
            let idx = f.indices();
            for e in 0..idx.len() {
                let a = idx[e];
                let b = idx[(e + 1) % idx.len()];
                edges.insert((a.min(b), a.max(b)));
            }
        }
        let chi = mesh.vertices.len() as i64 - edges.len() as i64 + mesh.faces.len() as i64;
        assert_eq!(chi, 0);
    }

    #[test]
    fn undefined_strip_culls_incident_quads() {
        let s = |u: f64, v: f64| {
            if (0.4..0.6).contains(&u) {
                None
            } else {
                Some(Vec3::new(u, v, 0.0))
            }
        };
        let mesh = tessellate_surface(&s, (0.0, 1.0), (0.0, 1.0), 10, 4);
        for f in &mesh.faces {
            for &i in f.indices() {
                let u = mesh.uv.as_ref().unwrap()[i as usize].0;
                assert!(!(0.4..0.6).contains(&u));
            }
        }
        assert!(!mesh.faces.is_empty());
        assert!(mesh.faces.len() < 40);
    }

    #[test]
    fn degenerate_surface_gives_empty_mesh() {
        let s = |_u: f64, _v: f64| Some(Vec3::new(1.0, 2.0, 3.0));
        let mesh = tessellate_surface(&s, (0.0, 0.0), (0.0, 0.0), 4, 4);
        assert!(mesh.faces.is_empty());
    }
}
