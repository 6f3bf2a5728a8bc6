//! Turns the construction's values into per-view draw lists.

use crate::commands::{bivariate_field, eval_curve2, eval_curve3, eval_surface};
use crate::eval::{apply_function1, EvalCtx};
use crate::graph::Construction;
use crate::kernel::geom::{Mesh, MeshFace, Polyline2, Polyline3, Vec2, Vec3, Window2};
use crate::kernel::{clip_polyline, sample_curve2, sample_curve3, sample_function_graph, tessellate_surface};
use crate::value::{ColorSpec, EvalConfig, GeoValue, StyleSpec, View};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrawStyle {
    pub color: [f64; 3],
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Draw2 {
    Polyline(Polyline2),
    Point(Vec2),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Draw3 {
    Mesh(Mesh),
    Polyline(Polyline3),
    Point(Vec3),
}

/// Draw list of one 2D sheet; order follows the construction order.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene2D {
    pub view: View,
    pub window: Window2,
    pub items: Vec<(Draw2, DrawStyle)>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Scene3D {
    pub items: Vec<(Draw3, DrawStyle)>,
}

pub struct Scenes {
    pub d2: Scene2D,
    pub d2_second: Scene2D,
    pub d3: Scene3D,
}

/// Renders every visible object into its view's scene.
pub fn build_scenes(graph: &Construction) -> Scenes {
    let config = *graph.config();
    let ctx = EvalCtx::new(graph);
    let mut scenes = Scenes {
        d2: Scene2D { view: View::D2, window: config.window, items: Vec::new() },
        d2_second: Scene2D { view: View::D2Second, window: config.window, items: Vec::new() },
        d3: Scene3D::default(),
    };
    for (_, node) in graph.iter() {
        let Some(style) = resolve_style(&ctx, &node.style) else { continue };
        match node.view {
            View::D3 => {
                let mut draws = Vec::new();
                render_3d(&ctx, &config, &node.value, &mut draws);
                scenes.d3.items.extend(draws.into_iter().map(|d| (d, style)));
            }
            v => {
                let scene =
                    if v == View::D2 { &mut scenes.d2 } else { &mut scenes.d2_second };
                let mut draws = Vec::new();
                render_2d(&ctx, &config, &node.value, &mut draws);
                scene.items.extend(draws.into_iter().map(|d| (d, style)));
            }
        }
    }
    scenes
}

/// Evaluates dynamic color channels against the current values and clamps
/// each channel to [0,1]. Returns None for invisible objects.
pub fn resolve_style(ctx: &EvalCtx, style: &StyleSpec) -> Option<DrawStyle> {
    if !style.visible {
        return None;
    }
    let color = match &style.color {
        ColorSpec::Static(rgb) => *rgb,
        ColorSpec::Dynamic(exprs) => {
            let mut rgb = [0.0; 3];
            for (slot, e) in rgb.iter_mut().zip(exprs.iter()) {
                let v = crate::eval::evaluate(ctx, &Vec::new(), e)
                    .ok()
                    .and_then(|v| v.as_number())
                    .unwrap_or(0.0);
                *slot = if v.is_finite() { v.clamp(0.0, 1.0) } else { 0.0 };
            }
            rgb
        }
    };
    Some(DrawStyle { color, width: style.width })
}

fn render_2d(ctx: &EvalCtx, config: &EvalConfig, value: &GeoValue, out: &mut Vec<Draw2>) {
    let window = config.window;
    let clip_all = |pls: Vec<Polyline2>, out: &mut Vec<Draw2>| {
        for pl in pls {
            for part in clip_polyline(&pl, window) {
                out.push(Draw2::Polyline(part));
            }
        }
    };
    match value {
        GeoValue::Point2(p) => {
            if window.contains(*p) {
                out.push(Draw2::Point(*p));
            }
        }
        GeoValue::Function1(f) => {
            let eval = |x: f64| {
                apply_function1(ctx, f, GeoValue::Number(x)).ok().and_then(|v| v.as_number())
            };
            let pls = sample_function_graph(&eval, (f.lo, f.hi), window, config.curve_samples);
            clip_all(pls, out);
        }
        GeoValue::Curve(c) if c.dim() == 2 => {
            let eval = |t: f64| eval_curve2(ctx, c, t);
            let pls = sample_curve2(&eval, c.lo, c.hi, config.curve_samples);
            clip_all(pls, out);
        }
        GeoValue::Segment2(a, b) => {
            clip_all(vec![Polyline2::new(vec![*a, *b], false)], out);
        }
        GeoValue::Line2 { p, d } => {
            if d.norm() > 0.0 {
                // span far beyond the window, then clip
                let reach = (window.diagonal()
                    + p.dist(Vec2::new(
                        (window.xmin + window.xmax) / 2.0,
                        (window.ymin + window.ymax) / 2.0,
                    )))
                    * 2.0;
                let dir = d.normalize();
                let seg = Polyline2::new(vec![*p - dir * reach, *p + dir * reach], false);
                clip_all(vec![seg], out);
            }
        }
        GeoValue::Circle { center, r } => {
            let n = config.curve_samples.max(16);
            let mut pl = Polyline2 { pts: Vec::with_capacity(n), closed: true };
            for i in 0..n {
                let a = std::f64::consts::TAU * i as f64 / n as f64;
                pl.push(*center + Vec2::new(a.cos(), a.sin()) * *r);
            }
            clip_all(vec![pl], out);
        }
        GeoValue::Polygon2(pts) => {
            clip_all(vec![Polyline2::new(pts.to_vec(), true)], out);
        }
        GeoValue::ContourSet(cs) => {
            clip_all(cs.polylines.clone(), out);
        }
        GeoValue::Locus(pls) => {
            clip_all(pls.to_vec(), out);
        }
        GeoValue::List(items) => {
            for item in items.iter() {
                render_2d(ctx, config, item, out);
            }
        }
        _ => {}
    }
}

fn render_3d(ctx: &EvalCtx, config: &EvalConfig, value: &GeoValue, out: &mut Vec<Draw3>) {
    let window = config.window;
    let (nu, nv) = config.tessellation;
    match value {
        GeoValue::Point3(p) => out.push(Draw3::Point(*p)),
        GeoValue::Point2(p) => out.push(Draw3::Point(Vec3::new(p.x, p.y, 0.0))),
        GeoValue::Segment3(a, b) => {
            out.push(Draw3::Polyline(Polyline3 { pts: vec![*a, *b], closed: false }))
        }
        GeoValue::Segment2(a, b) => out.push(Draw3::Polyline(Polyline3 {
            pts: vec![Vec3::new(a.x, a.y, 0.0), Vec3::new(b.x, b.y, 0.0)],
            closed: false,
        })),
        GeoValue::Function2(f) | GeoValue::GraphSurface(f) => {
            let field = bivariate_field(ctx, f);
            let rect = f.domain.unwrap_or([window.xmin, window.xmax, window.ymin, window.ymax]);
            let s = |u: f64, v: f64| {
                let z = field(u, v);
                z.is_finite().then(|| Vec3::new(u, v, z))
            };
            out.push(Draw3::Mesh(tessellate_surface(&s, (rect[0], rect[1]), (rect[2], rect[3]), nu, nv)));
        }
        GeoValue::Plane { a, b, c } => {
            let s = |u: f64, v: f64| Some(Vec3::new(u, v, a * u + b * v + c));
            out.push(Draw3::Mesh(tessellate_surface(
                &s,
                (window.xmin, window.xmax),
                (window.ymin, window.ymax),
                2,
                2,
            )));
        }
        GeoValue::Surface(surf) => {
            let s = |u: f64, v: f64| eval_surface(ctx, surf, u, v);
            out.push(Draw3::Mesh(tessellate_surface(&s, surf.u_range(), surf.v_range(), nu, nv)));
        }
        GeoValue::Curve(c) => {
            if c.dim() == 3 {
                let eval = |t: f64| eval_curve3(ctx, c, t);
                for pl in sample_curve3(&eval, c.lo, c.hi, config.curve_samples) {
                    out.push(Draw3::Polyline(pl));
                }
            } else {
                let eval = |t: f64| eval_curve2(ctx, c, t);
                for pl in sample_curve2(&eval, c.lo, c.hi, config.curve_samples) {
                    out.push(Draw3::Polyline(lift(pl, 0.0)));
                }
            }
        }
        GeoValue::Cube(cube) => {
            let mut mesh = Mesh::default();
            mesh.vertices.extend_from_slice(&cube.verts);
            for f in crate::kernel::unfold::FACES {
                mesh.faces.push(MeshFace::Quad([
                    f[0] as u32,
                    f[1] as u32,
                    f[2] as u32,
                    f[3] as u32,
                ]));
            }
            out.push(Draw3::Mesh(mesh));
        }
        GeoValue::Net(net) => {
            let mut mesh = Mesh::default();
            for quad in &net.quads {
                let base = mesh.vertices.len() as u32;
                mesh.vertices.extend_from_slice(quad);
                mesh.faces.push(MeshFace::Quad([base, base + 1, base + 2, base + 3]));
            }
            out.push(Draw3::Mesh(mesh));
        }
        GeoValue::Polygon3(pts) => {
            let mut mesh = Mesh::default();
            mesh.vertices.extend_from_slice(pts);
            match pts.len() {
                3 => mesh.faces.push(MeshFace::Tri([0, 1, 2])),
                4 => mesh.faces.push(MeshFace::Quad([0, 1, 2, 3])),
                n => {
                    for i in 1..n - 1 {
                        mesh.faces.push(MeshFace::Tri([0, i as u32, i as u32 + 1]));
                    }
                }
            }
            out.push(Draw3::Mesh(mesh));
        }
        GeoValue::Polygon2(pts) => {
            out.push(Draw3::Polyline(lift(Polyline2::new(pts.to_vec(), true), 0.0)));
        }
        GeoValue::ContourSet(cs) => {
            for pl in &cs.polylines {
                out.push(Draw3::Polyline(lift(pl.clone(), cs.k)));
            }
        }
        GeoValue::Locus(pls) => {
            for pl in pls.iter() {
                out.push(Draw3::Polyline(lift(pl.clone(), 0.0)));
            }
        }
        GeoValue::List(items) => {
            for item in items.iter() {
                render_3d(ctx, config, item, out);
            }
        }
        _ => {}
    }
}

fn lift(pl: Polyline2, z: f64) -> Polyline3 {
    Polyline3 {
        pts: pl.pts.iter().map(|p| Vec3::new(p.x, p.y, z)).collect(),
        closed: pl.closed,
    }
}

/// Sample table for CSV export: (component, index, coords); `has_z` selects
/// the 3-coordinate layout.
pub struct CsvTable {
    pub has_z: bool,
    pub rows: Vec<(u32, u32, [f64; 3])>,
}

/// Flattens an object's samples for CSV export. Points, lists of points,
/// polyline-like objects (functions, curves, loci) and contour sets are
/// supported.
pub fn csv_table_for(graph: &Construction, value: &GeoValue) -> Option<CsvTable> {
    let config = *graph.config();
    let ctx = EvalCtx::new(graph);
    let mut table = CsvTable { has_z: false, rows: Vec::new() };

    fn push_polylines(table: &mut CsvTable, pls: &[Polyline2]) {
        for (c, pl) in pls.iter().enumerate() {
            for (i, p) in pl.pts.iter().enumerate() {
                table.rows.push((c as u32, i as u32, [p.x, p.y, 0.0]));
            }
        }
    }

    match value {
        GeoValue::Point2(p) => table.rows.push((0, 0, [p.x, p.y, 0.0])),
        GeoValue::Point3(p) => {
            table.has_z = true;
            table.rows.push((0, 0, [p.x, p.y, p.z]));
        }
        GeoValue::Locus(pls) => push_polylines(&mut table, pls),
        GeoValue::ContourSet(cs) => push_polylines(&mut table, &cs.polylines),
        GeoValue::Function1(f) => {
            let eval = |x: f64| {
                apply_function1(&ctx, f, GeoValue::Number(x)).ok().and_then(|v| v.as_number())
            };
            let pls =
                sample_function_graph(&eval, (f.lo, f.hi), config.window, config.curve_samples);
            push_polylines(&mut table, &pls);
        }
        GeoValue::Curve(c) if c.dim() == 2 => {
            let eval = |t: f64| eval_curve2(&ctx, c, t);
            let pls = sample_curve2(&eval, c.lo, c.hi, config.curve_samples);
            push_polylines(&mut table, &pls);
        }
        GeoValue::Curve(c) => {
            let eval = |t: f64| eval_curve3(&ctx, c, t);
            table.has_z = true;
            for (ci, pl) in sample_curve3(&eval, c.lo, c.hi, config.curve_samples)
                .iter()
                .enumerate()
            {
                for (i, p) in pl.pts.iter().enumerate() {
                    table.rows.push((ci as u32, i as u32, [p.x, p.y, p.z]));
                }
            }
        }
        GeoValue::List(items) => {
            // a list of points becomes one component of consecutive samples
            let mut idx = 0;
            for item in items.iter() {
                match item {
                    GeoValue::Point2(p) => {
                        table.rows.push((0, idx, [p.x, p.y, 0.0]));
                        idx += 1;
                    }
                    GeoValue::Point3(p) => {
                        table.has_z = true;
                        table.rows.push((0, idx, [p.x, p.y, p.z]));
                        idx += 1;
                    }
                    GeoValue::Undefined => {}
                    _ => return None,
                }
            }
        }
        _ => return None,
    }
    Some(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_script;

    fn scenes_for(src: &str) -> Scenes {
        let mut g = Construction::new(EvalConfig::default());
        g.run_script(&parse_script(src).unwrap()).unwrap();
        build_scenes(&g)
    }

    #[test]
    fn sliders_do_not_render() {
        let s = scenes_for("m=Seletor(-5, 5, 1)\n");
        assert!(s.d2.items.is_empty() && s.d3.items.is_empty());
    }

    #[test]
    fn function_renders_into_2d() {
        let s = scenes_for("f(x)=x^2\n");
        assert!(matches!(s.d2.items[0].0, Draw2::Polyline(_)));
    }

    #[test]
    fn views_route_independently() {
        let s = scenes_for("A=(1,1)\n#view 2d2\nB=(2,2)\n");
        assert_eq!(s.d2.items.len(), 1);
        assert_eq!(s.d2_second.items.len(), 1);
    }

    #[test]
    fn dynamic_color_channels_clamp() {
        let src = "a=Seletor(0, 10, 1)\nf(x)=a x\nDefinirCorDinâmica(f, a/2, -1, 0.5)\n";
        let mut g = Construction::new(EvalConfig::default());
        g.run_script(&parse_script(src).unwrap()).unwrap();
        g.set_slider("a", 10.0).unwrap();
        let ctx = EvalCtx::new(&g);
        let style = resolve_style(&ctx, &g.node(g.lookup("f").unwrap()).style).unwrap();
        assert_eq!(style.color, [1.0, 0.0, 0.5]);
    }

    #[test]
    fn cube_meshes_have_six_quads() {
        let s = scenes_for("A=(0,0,0)\nB=(1,0,0)\nCb=Cubo(A, B)\n");
        let mesh = s
            .d3
            .items
            .iter()
            .find_map(|(d, _)| match d {
                Draw3::Mesh(m) => Some(m),
                _ => None,
            })
            .unwrap();
        assert_eq!(mesh.faces.len(), 6);
        assert_eq!(mesh.vertices.len(), 8);
    }
}
