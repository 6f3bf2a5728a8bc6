//! SVG 1.1 export of 2D scenes.

use std::io::Write;
use std::path::Path;

use super::numfmt::fmt_sig;
use crate::kernel::geom::Vec2;
use crate::scene::{Draw2, Scene2D};

const SIG: usize = 6;
const POINT_RADIUS: f64 = 3.0;

fn color_hex(rgb: [f64; 3]) -> String {
    let to8 = |c: f64| (c.clamp(0.0, 1.0) * 255.0).round() as u8;
    format!("#{:02x}{:02x}{:02x}", to8(rgb[0]), to8(rgb[1]), to8(rgb[2]))
}

/// Renders the scene to SVG text: the world window maps affinely onto the
/// pixel viewport with y flipped, one `path` per polyline and one `circle`
/// per point.
pub fn svg_string(scene: &Scene2D, size: (u32, u32)) -> String {
    let (w, h) = size;
    let win = scene.window;
    let map = |p: Vec2| -> (f64, f64) {
        let x = (p.x - win.xmin) / win.width() * w as f64;
        let y = h as f64 - (p.y - win.ymin) / win.height() * h as f64;
        (x, y)
    };
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w} {h}\">\n"
    ));
    for (draw, style) in &scene.items {
        match draw {
            Draw2::Polyline(pl) => {
                if pl.pts.len() < 2 {
                    continue;
                }
                let mut d = String::new();
                for (i, p) in pl.pts.iter().enumerate() {
                    let (x, y) = map(*p);
                    d.push_str(if i == 0 { "M " } else { " L " });
                    d.push_str(&fmt_sig(x, SIG));
                    d.push(' ');
                    d.push_str(&fmt_sig(y, SIG));
                }
                if pl.closed {
                    d.push_str(" Z");
                }
                out.push_str(&format!(
                    "<path d=\"{d}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"/>\n",
                    color_hex(style.color),
                    fmt_sig(style.width, SIG),
                ));
            }
            Draw2::Point(p) => {
                let (x, y) = map(*p);
                out.push_str(&format!(
                    "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>\n",
                    fmt_sig(x, SIG),
                    fmt_sig(y, SIG),
                    fmt_sig(POINT_RADIUS, SIG),
                    color_hex(style.color),
                ));
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

pub fn export_svg(scene: &Scene2D, size: (u32, u32), path: &Path) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(svg_string(scene, size).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::geom::{Polyline2, Window2};
    use crate::scene::DrawStyle;
    use crate::value::View;

    fn unit_scene(items: Vec<(Draw2, DrawStyle)>) -> Scene2D {
        Scene2D { view: View::D2, window: Window2::new(0.0, 1.0, 0.0, 1.0), items }
    }

    #[test]
    fn corner_mapping_flips_y() {
        let style = DrawStyle { color: [0.0, 0.0, 0.0], width: 1.0 };
        let scene = unit_scene(vec![
            (Draw2::Point(Vec2::new(0.0, 0.0)), style),
            (Draw2::Point(Vec2::new(1.0, 1.0)), style),
        ]);
        let svg = svg_string(&scene, (100, 100));
        assert!(svg.contains("cx=\"0\" cy=\"100\""), "{svg}");
        assert!(svg.contains("cx=\"100\" cy=\"0\""), "{svg}");
    }

    #[test]
    fn out_of_range_color_channels_clamp() {
        let style = DrawStyle { color: [1.7, -0.2, 0.5], width: 1.0 };
        let scene = unit_scene(vec![(Draw2::Point(Vec2::new(0.5, 0.5)), style)]);
        let svg = svg_string(&scene, (100, 100));
        assert!(svg.contains("#ff0080"), "{svg}");
    }

    #[test]
    fn export_is_byte_stable() {
        let style = DrawStyle { color: [0.0, 0.3, 0.9], width: 1.5 };
        let pl = Polyline2::new(vec![Vec2::new(0.1, 0.2), Vec2::new(0.9, 0.7)], false);
        let scene = unit_scene(vec![(Draw2::Polyline(pl), style)]);
        assert_eq!(svg_string(&scene, (640, 480)), svg_string(&scene, (640, 480)));
    }

    #[test]
    fn path_vertex_count_matches_polyline() {
        let style = DrawStyle { color: [0.0; 3], width: 1.0 };
        let pl = Polyline2::new(
            vec![Vec2::new(0.1, 0.1), Vec2::new(0.5, 0.9), Vec2::new(0.9, 0.1)],
            false,
        );
        let scene = unit_scene(vec![(Draw2::Polyline(pl), style)]);
        let svg = svg_string(&scene, (100, 100));
        let line = svg.lines().find(|l| l.starts_with("<path")).unwrap();
        assert_eq!(line.matches(" L ").count(), 2);
        assert_eq!(line.matches("M ").count(), 1);
    }
}
