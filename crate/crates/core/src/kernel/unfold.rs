//! Cube construction and parametric net unfolding.
//!
//! Vertices carry letters A..H: ABCD is the base square, EFGH the top.
//! A net is described by the base face plus a set of cut edges; the hinge
//! tree is the breadth-first spanning tree of the face-adjacency graph with
//! the cut edges removed. Each face then rotates about its hinge by
//! t · 90° away from the cube interior, transforms composing down the tree,
//! so t = 0 is the cube itself and t = 1 the flat net.

use std::f64::consts::FRAC_PI_2;

use thiserror::Error;

use super::geom::{RigidTransform, Vec3};
use crate::value::{CubeData, NetData};

/// Face vertex cycles (quad corners in order): ABCD, ABFE, BCGF, CDHG,
/// ADHE, EFGH.
pub const FACES: [[u8; 4]; 6] = [
    [0, 1, 2, 3],
    [0, 1, 5, 4],
    [1, 2, 6, 5],
    [2, 3, 7, 6],
    [0, 3, 7, 4],
    [4, 5, 6, 7],
];

pub const BASE_FACE: usize = 0;
pub const TOP_FACE: usize = 5;

/// The 12 edges as vertex pairs, letters in alphabetical order.
pub const EDGES: [(u8, u8); 12] = [
    (0, 1), // AB
    (1, 2), // BC
    (2, 3), // CD
    (0, 3), // AD
    (0, 4), // AE
    (1, 5), // BF
    (2, 6), // CG
    (3, 7), // DH
    (4, 5), // EF
    (5, 6), // FG
    (6, 7), // GH
    (4, 7), // EH
];

/// Cut set reproducing the standard cross net: every vertical edge plus all
/// top edges except FG, so the top face hinges to the face containing B and
/// C.
pub const DEFAULT_CUTS: [usize; 7] = [4, 5, 6, 7, 8, 10, 11];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NetError {
    #[error("coincident cube corners")]
    DegenerateCube,
    #[error("unknown face `{0}`")]
    UnknownFace(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("edge list does not yield a spanning tree of the cube's faces")]
    NotSpanning,
}

/// Builds the cube determined by two adjacent vertices A and B. The base
/// square ABCD lies in the plane through A and B orthogonal to the upward
/// normal, completed counterclockwise seen from +z; EFGH sits above it.
pub fn cube_from_two_vertices(a: Vec3, b: Vec3) -> Result<CubeData, NetError> {
    let ab = b - a;
    let edge = ab.norm();
    if edge < 1e-12 {
        return Err(NetError::DegenerateCube);
    }
    let u = ab / edge;
    let z = Vec3::new(0.0, 0.0, 1.0);
    let mut side = z.cross(u);
    if side.norm() < 1e-12 {
        // AB is vertical; fall back to the y direction for the side edge
        side = Vec3::new(0.0, 1.0, 0.0);
    }
    let v = side.normalize();
    let n = u.cross(v);
    let (sv, sn) = (v * edge, n * edge);
    let verts = [a, b, b + sv, a + sv, a + sn, b + sn, b + sv + sn, a + sv + sn];
    Ok(CubeData { verts })
}

fn letters_of(name: &str) -> Vec<u8> {
    name.chars()
        .filter(|c| ('A'..='H').contains(c))
        .map(|c| c as u8 - b'A')
        .collect()
}

/// Resolves names like `faceABCD` (any rotation or reflection of the
/// letters) to a face index.
pub fn face_by_name(name: &str) -> Result<usize, NetError> {
    let mut letters = letters_of(name);
    letters.sort_unstable();
    if letters.len() == 4 {
        for (i, f) in FACES.iter().enumerate() {
            let mut fl = *f;
            fl.sort_unstable();
            if fl == letters[..] {
                return Ok(i);
            }
        }
    }
    Err(NetError::UnknownFace(name.to_string()))
}

/// Resolves names like `arestaBC` / `edgeBC` (letters in either order) to an
/// edge index.
pub fn edge_by_name(name: &str) -> Result<usize, NetError> {
    let mut letters = letters_of(name);
    letters.sort_unstable();
    if letters.len() == 2 {
        for (i, (a, b)) in EDGES.iter().enumerate() {
            if letters[0] == *a && letters[1] == *b {
                return Ok(i);
            }
        }
    }
    Err(NetError::UnknownEdge(name.to_string()))
}

/// The two faces sharing each edge.
fn edge_faces(edge: usize) -> (usize, usize) {
    let (a, b) = EDGES[edge];
    let mut found = [usize::MAX; 2];
    let mut n = 0;
    for (i, f) in FACES.iter().enumerate() {
        if f.contains(&a) && f.contains(&b) {
            found[n] = i;
            n += 1;
        }
    }
    (found[0], found[1])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HingeTree {
    /// Parent face per face; `None` exactly at the base.
    pub parent: [Option<u8>; 6],
    /// Hinge edge (cube vertex pair) connecting each non-base face to its
    /// parent.
    pub hinge: [(u8, u8); 6],
    pub base: usize,
}

/// Breadth-first spanning tree of the face-adjacency graph minus the cut
/// edges, rooted at `base`. Neighbors are scanned in canonical face order,
/// which makes the tree (and therefore the unfolded shape) deterministic.
pub fn hinge_tree(base: usize, cuts: &[usize]) -> Result<HingeTree, NetError> {
    let mut adjacency = [[usize::MAX; 6]; 6]; // edge index or MAX
    for e in 0..EDGES.len() {
        if cuts.contains(&e) {
            continue;
        }
        let (fa, fb) = edge_faces(e);
        adjacency[fa][fb] = e;
        adjacency[fb][fa] = e;
    }
    let mut parent = [None; 6];
    let mut hinge = [(0u8, 0u8); 6];
    let mut seen = [false; 6];
    seen[base] = true;
    let mut queue = std::collections::VecDeque::from([base]);
    while let Some(f) = queue.pop_front() {
        for g in 0..6 {
            let e = adjacency[f][g];
            if e != usize::MAX && !seen[g] {
                seen[g] = true;
                parent[g] = Some(f as u8);
                hinge[g] = EDGES[e];
                queue.push_back(g);
            }
        }
    }
    if seen.iter().all(|&s| s) {
        Ok(HingeTree { parent, hinge, base })
    } else {
        Err(NetError::NotSpanning)
    }
}

fn face_center(cube: &CubeData, face: usize) -> Vec3 {
    let mut c = Vec3::default();
    for &v in &FACES[face] {
        c = c + cube.verts[v as usize];
    }
    c / 4.0
}

/// Rigid placements of the six faces at fold parameter `t ∈ [0,1]`. The base
/// face is fixed; each child rotates about its hinge line, taken in the
/// parent's already-unfolded frame, by t · 90° in the direction that moves
/// it away from the cube interior.
pub fn unfold_cube_transforms(cube: &CubeData, tree: &HingeTree, t: f64) -> [RigidTransform; 6] {
    let cube_center = {
        let mut c = Vec3::default();
        for v in &cube.verts {
            c = c + *v;
        }
        c / 8.0
    };
    // topological order: parents before children
    let mut order = Vec::with_capacity(6);
    let mut placed = [false; 6];
    order.push(tree.base);
    placed[tree.base] = true;
    while order.len() < 6 {
        for f in 0..6 {
            if !placed[f] && tree.parent[f].map_or(false, |p| placed[p as usize]) {
                placed[f] = true;
                order.push(f);
            }
        }
    }

    let mut transforms = [RigidTransform::identity(); 6];
    for &f in &order[1..] {
        let p = tree.parent[f].unwrap() as usize;
        let (ha, hb) = tree.hinge[f];
        let a = cube.verts[ha as usize];
        let b = cube.verts[hb as usize];
        // opening direction, decided in cube space: a small rotation must
        // move the face center away from the cube center
        let center = face_center(cube, f);
        let probe = 1e-3;
        let d_plus = RigidTransform::about_line(a, b, probe).apply(center).dist(cube_center);
        let d_minus = RigidTransform::about_line(a, b, -probe).apply(center).dist(cube_center);
        let sign = if d_plus >= d_minus { 1.0 } else { -1.0 };

        let parent_t = transforms[p];
        let axis_a = parent_t.apply(a);
        let axis_b = parent_t.apply(b);
        let rot = RigidTransform::about_line(axis_a, axis_b, sign * t * FRAC_PI_2);
        transforms[f] = rot.compose(&parent_t);
    }
    transforms
}

/// Computes the full net state for the given base face and cut edges.
pub fn compute_net(
    cube: &CubeData,
    base: usize,
    cuts: &[usize],
    t: f64,
) -> Result<NetData, NetError> {
    let t = t.clamp(0.0, 1.0);
    let tree = hinge_tree(base, cuts)?;
    let transforms = unfold_cube_transforms(cube, &tree, t);
    let mut quads = [[Vec3::default(); 4]; 6];
    for f in 0..6 {
        for (i, &v) in FACES[f].iter().enumerate() {
            quads[f][i] = transforms[f].apply(cube.verts[v as usize]);
        }
    }
    Ok(NetData { cube: *cube, t, transforms, quads, parent: tree.parent })
}

/// World position of face-local coordinates (s1, s2) ∈ [0,1]² on a placed
/// net face: bilinear over the face quad (affine, since faces are squares).
pub fn net_face_point(net: &NetData, face: usize, s1: f64, s2: f64) -> Vec3 {
    let q = &net.quads[face];
    let v0 = q[0];
    let v1 = q[1];
    let v3 = q[3];
    v0 + (v1 - v0) * s1 + (v3 - v0) * s2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_cube() -> CubeData {
        cube_from_two_vertices(Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0)).unwrap()
    }

    #[test]
    fn unit_cube_vertex_assignment() {
        let c = unit_cube();
        let want = [
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(1.0, 0.0, 1.0),
            Vec3::new(1.0, 1.0, 1.0),
            Vec3::new(0.0, 1.0, 1.0),
        ];
        for (got, want) in c.verts.iter().zip(&want) {
            assert!(got.dist(*want) < 1e-12);
        }
        // all 12 edges have unit length, all faces are planar unit squares
        for (a, b) in EDGES {
            assert!((c.verts[a as usize].dist(c.verts[b as usize]) - 1.0).abs() < 1e-12);
        }
        for f in FACES {
            let q: Vec<Vec3> = f.iter().map(|&v| c.verts[v as usize]).collect();
            let n = (q[1] - q[0]).cross(q[3] - q[0]);
            assert!(((q[2] - q[0]).dot(n)).abs() < 1e-12, "face not planar");
            assert!((q[0].dist(q[2]) - 2f64.sqrt()).abs() < 1e-12, "diagonal");
        }
    }

    #[test]
    fn degenerate_cube_is_rejected() {
        let p = Vec3::new(1.0, 2.0, 3.0);
        assert_eq!(cube_from_two_vertices(p, p), Err(NetError::DegenerateCube));
    }

    #[test]
    fn face_and_edge_lookup() {
        assert_eq!(face_by_name("faceABCD").unwrap(), 0);
        assert_eq!(face_by_name("faceDCBA").unwrap(), 0);
        assert_eq!(face_by_name("faceEFGH").unwrap(), 5);
        assert_eq!(edge_by_name("arestaBC").unwrap(), 1);
        assert_eq!(edge_by_name("edgeCB").unwrap(), 1);
        assert!(face_by_name("faceABCE").is_err());
        assert!(edge_by_name("arestaAG").is_err());
    }

    #[test]
    fn folded_net_reproduces_the_cube() {
        let c = unit_cube();
        let net = compute_net(&c, BASE_FACE, &DEFAULT_CUTS, 0.0).unwrap();
        for f in 0..6 {
            for (i, &v) in FACES[f].iter().enumerate() {
                assert!(net.quads[f][i].dist(c.verts[v as usize]) < 1e-12);
            }
        }
    }

    #[test]
    fn flat_net_lies_in_the_base_plane() {
        let c = unit_cube();
        let net = compute_net(&c, BASE_FACE, &DEFAULT_CUTS, 1.0).unwrap();
        for q in &net.quads {
            for p in q {
                assert!(p.z.abs() <= 1e-9, "z = {}", p.z);
            }
        }
    }

    #[test]
    fn hinge_vertices_coincide_for_any_t() {
        let c = unit_cube();
        let tree = hinge_tree(BASE_FACE, &DEFAULT_CUTS).unwrap();
        for t in [0.0, 0.3, 0.77, 1.0] {
            let tr = unfold_cube_transforms(&c, &tree, t);
            for f in 0..6 {
                if let Some(p) = tree.parent[f] {
                    let (a, b) = tree.hinge[f];
                    for v in [a, b] {
                        let pv = c.verts[v as usize];
                        assert!(tr[f].apply(pv).dist(tr[p as usize].apply(pv)) < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn unfolding_is_per_face_isometric() {
        let c = unit_cube();
        for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let net = compute_net(&c, BASE_FACE, &DEFAULT_CUTS, t).unwrap();
            for (f, q) in net.quads.iter().enumerate() {
                let orig: Vec<Vec3> = FACES[f].iter().map(|&v| c.verts[v as usize]).collect();
                for i in 0..4 {
                    for j in i + 1..4 {
                        assert!((q[i].dist(q[j]) - orig[i].dist(orig[j])).abs() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn all_bottom_edges_cut_is_not_spanning() {
        // cutting every base edge disconnects the base face
        assert_eq!(hinge_tree(BASE_FACE, &[0, 1, 2, 3]), Err(NetError::NotSpanning));
    }

    #[test]
    fn default_top_face_hinges_on_the_bc_side_face() {
        let tree = hinge_tree(BASE_FACE, &DEFAULT_CUTS).unwrap();
        // face index 2 is BCGF, the side containing B and C
        assert_eq!(tree.parent[TOP_FACE], Some(2));
        for side in 1..5 {
            assert_eq!(tree.parent[side], Some(BASE_FACE as u8));
        }
    }
}
