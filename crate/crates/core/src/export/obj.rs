//! Wavefront OBJ export of the 3D scene.
//!
//! Meshes use only `v` and `f` records (quads stay quads, indices are
//! 1-based). Standalone 3D polylines and points additionally use the `l`
//! and `p` records, since faces cannot carry them.

use std::io::Write;
use std::path::Path;

use super::numfmt::fmt_sig;
use crate::scene::{Draw3, Scene3D};

const SIG: usize = 9;

pub fn obj_string(scene: &Scene3D) -> String {
    let mut out = String::new();
    let mut base = 1usize; // OBJ indices are 1-based
    for (draw, _style) in &scene.items {
        match draw {
            Draw3::Mesh(mesh) => {
                for v in &mesh.vertices {
                    out.push_str(&format!(
                        "v {} {} {}\n",
                        fmt_sig(v.x, SIG),
                        fmt_sig(v.y, SIG),
                        fmt_sig(v.z, SIG)
                    ));
                }
                for face in &mesh.faces {
                    out.push('f');
                    for &i in face.indices() {
                        out.push_str(&format!(" {}", base + i as usize));
                    }
                    out.push('\n');
                }
                base += mesh.vertices.len();
            }
            Draw3::Polyline(pl) => {
                if pl.pts.len() < 2 {
                    continue;
                }
                for v in &pl.pts {
                    out.push_str(&format!(
                        "v {} {} {}\n",
                        fmt_sig(v.x, SIG),
                        fmt_sig(v.y, SIG),
                        fmt_sig(v.z, SIG)
                    ));
                }
                out.push('l');
                for i in 0..pl.pts.len() {
                    out.push_str(&format!(" {}", base + i));
                }
                if pl.closed {
                    out.push_str(&format!(" {base}"));
                }
                out.push('\n');
                base += pl.pts.len();
            }
            Draw3::Point(p) => {
                out.push_str(&format!(
                    "v {} {} {}\n",
                    fmt_sig(p.x, SIG),
                    fmt_sig(p.y, SIG),
                    fmt_sig(p.z, SIG)
                ));
                out.push_str(&format!("p {base}\n"));
                base += 1;
            }
        }
    }
    out
}

pub fn export_obj(scene: &Scene3D, path: &Path) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(obj_string(scene).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::geom::Vec3;
    use crate::kernel::tessellate_surface;
    use crate::scene::DrawStyle;

    fn style() -> DrawStyle {
        DrawStyle { color: [0.0; 3], width: 1.0 }
    }

    #[test]
    fn patch_counts_and_index_validity() {
        let s = |u: f64, v: f64| Some(Vec3::new(u, v, u * v));
        let mesh = tessellate_surface(&s, (0.0, 1.0), (0.0, 1.0), 2, 2);
        let scene = Scene3D { items: vec![(Draw3::Mesh(mesh), style())] };
        let obj = obj_string(&scene);
        let v_lines = obj.lines().filter(|l| l.starts_with("v ")).count();
        let f_lines: Vec<&str> = obj.lines().filter(|l| l.starts_with("f ")).collect();
        assert_eq!(v_lines, 9);
        assert_eq!(f_lines.len(), 4);
        for line in f_lines {
            for idx in line.split_whitespace().skip(1) {
                let i: usize = idx.parse().unwrap();
                assert!(i >= 1 && i <= v_lines);
            }
        }
    }

    #[test]
    fn multiple_items_offset_indices() {
        let s = |u: f64, v: f64| Some(Vec3::new(u, v, 0.0));
        let mesh = tessellate_surface(&s, (0.0, 1.0), (0.0, 1.0), 2, 2);
        let scene = Scene3D {
            items: vec![
                (Draw3::Mesh(mesh.clone()), style()),
                (Draw3::Point(Vec3::new(5.0, 5.0, 5.0)), style()),
                (Draw3::Mesh(mesh), style()),
            ],
        };
        let obj = obj_string(&scene);
        assert!(obj.contains("p 10\n"));
        // the second mesh's first face starts past both the first mesh and the point
        let last_f = obj.lines().filter(|l| l.starts_with("f ")).last().unwrap();
        let first_idx: usize =
            last_f.split_whitespace().nth(1).unwrap().parse().unwrap();
        assert!(first_idx > 10);
    }
}
