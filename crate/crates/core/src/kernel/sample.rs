//! Discretization of function graphs, curves and loci into polylines.

use super::geom::{Polyline2, Polyline3, Vec2, Vec3, Window2};

/// Uniformly samples the graph of `f` over `domain ∩ [window.xmin,
/// window.xmax]` at `n` points. Infinite domain endpoints clamp to the
/// window, non-finite samples split the polyline, and the result is clipped
/// to the window. Returns an empty list when the visible domain is empty.
pub fn sample_function_graph(
    f: &dyn Fn(f64) -> Option<f64>,
    domain: (f64, f64),
    window: Window2,
    n: usize,
) -> Vec<Polyline2> {
    assert!(n >= 2);
    let lo = domain.0.max(window.xmin);
    let hi = domain.1.min(window.xmax);
    if !(lo <= hi) {
        return Vec::new();
    }
    let pieces = split_samples((0..n).map(|i| {
        let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        f(x).filter(|y| y.is_finite()).map(|y| Vec2::new(x, y))
    }));
    pieces.iter().flat_map(|pl| clip_polyline(pl, window)).collect()
}

/// Samples a parametric 2D curve over [lo, hi]; non-finite samples split.
pub fn sample_curve2(
    eval: &dyn Fn(f64) -> Option<Vec2>,
    lo: f64,
    hi: f64,
    n: usize,
) -> Vec<Polyline2> {
    assert!(n >= 2);
    split_samples((0..n).map(|i| {
        let t = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        eval(t).filter(|p| p.is_finite())
    }))
}

/// 3D counterpart of [`sample_curve2`].
pub fn sample_curve3(
    eval: &dyn Fn(f64) -> Option<Vec3>,
    lo: f64,
    hi: f64,
    n: usize,
) -> Vec<Polyline3> {
    assert!(n >= 2);
    let mut out = Vec::new();
    let mut cur = Polyline3::default();
    for i in 0..n {
        let t = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        match eval(t).filter(|p| p.is_finite()) {
            Some(p) => cur.pts.push(p),
            None => {
                if cur.pts.len() >= 2 {
                    out.push(std::mem::take(&mut cur));
                } else {
                    cur.pts.clear();
                }
            }
        }
    }
    if cur.pts.len() >= 2 {
        out.push(cur);
    }
    out
}

/// Sweeps a driver parameter s/N for s = 0..=N and collects the dependent
/// positions into polylines. Undefined samples split; so do jumps longer
/// than `jump_threshold` (branch handling).
pub fn sample_locus(
    n: usize,
    jump_threshold: f64,
    mut sample_at: impl FnMut(f64) -> Option<Vec2>,
) -> Vec<Polyline2> {
    let mut out = Vec::new();
    let mut cur = Polyline2::default();
    for s in 0..=n {
        let t = s as f64 / n as f64;
        match sample_at(t).filter(|p| p.is_finite()) {
            Some(p) => {
                if let Some(last) = cur.pts.last() {
                    if last.dist(p) > jump_threshold {
                        if cur.pts.len() >= 2 {
                            out.push(std::mem::take(&mut cur));
                        } else {
                            cur.pts.clear();
                        }
                    }
                }
                cur.push(p);
            }
            None => {
                if cur.pts.len() >= 2 {
                    out.push(std::mem::take(&mut cur));
                } else {
                    cur.pts.clear();
                }
            }
        }
    }
    if cur.pts.len() >= 2 {
        out.push(cur);
    }
    out
}

fn split_samples(samples: impl Iterator<Item = Option<Vec2>>) -> Vec<Polyline2> {
    let mut out = Vec::new();
    let mut cur = Polyline2::default();
    for s in samples {
        match s {
            Some(p) => cur.push(p),
            None => {
                if cur.pts.len() >= 2 {
                    out.push(std::mem::take(&mut cur));
                } else {
                    cur.pts.clear();
                }
            }
        }
    }
    if cur.pts.len() >= 2 {
        out.push(cur);
    }
    out
}

/// Clips one polyline to the window with Liang–Barsky segment clipping,
/// stitching consecutive visible parts back together.
pub fn clip_polyline(pl: &Polyline2, window: Window2) -> Vec<Polyline2> {
    let mut out: Vec<Polyline2> = Vec::new();
    let mut cur = Polyline2::default();
    let pts = &pl.pts;
    let seg_count = if pl.closed { pts.len() } else { pts.len().saturating_sub(1) };
    for s in 0..seg_count {
        let a = pts[s];
        let b = pts[(s + 1) % pts.len()];
        match clip_segment(a, b, window) {
            Some((ca, cb)) => {
                let continues = cur.pts.last().map_or(false, |last| last.dist(ca) < 1e-9);
                if !continues {
                    if cur.pts.len() >= 2 {
                        out.push(std::mem::take(&mut cur));
                    } else {
                        cur.pts.clear();
                    }
                    cur.push(ca);
                }
                cur.push(cb);
            }
            None => {
                if cur.pts.len() >= 2 {
                    out.push(std::mem::take(&mut cur));
                } else {
                    cur.pts.clear();
                }
            }
        }
    }
    if cur.pts.len() >= 2 {
        // a fully visible closed polyline stays closed
        let fully_visible = pl.closed && out.is_empty() && cur.pts.len() >= pts.len();
        cur.closed = fully_visible;
        if fully_visible && cur.pts.len() > pts.len() {
            cur.pts.pop(); // drop the duplicated wrap-around vertex
        }
        out.push(cur);
    }
    out
}

/// Liang–Barsky: visible part of segment a-b, or None.
fn clip_segment(a: Vec2, b: Vec2, w: Window2) -> Option<(Vec2, Vec2)> {
    let d = b - a;
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    for (p, q) in [
        (-d.x, a.x - w.xmin),
        (d.x, w.xmax - a.x),
        (-d.y, a.y - w.ymin),
        (d.y, w.ymax - a.y),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
            continue;
        }
        let r = q / p;
        if p < 0.0 {
            t0 = t0.max(r);
        } else {
            t1 = t1.min(r);
        }
        if t0 > t1 {
            return None;
        }
    }
    Some((a + d * t0, a + d * t1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semicircle_samples_only_inside_its_support() {
        // f(x) = 3 + sqrt(1 - x²): defined on [-1, 1] only
        let f = |x: f64| {
            let s = 1.0 - x * x;
            if s >= 0.0 {
                Some(3.0 + s.sqrt())
            } else {
                None
            }
        };
        let win = Window2::new(-2.0, 2.0, -2.0, 5.0);
        let pls = sample_function_graph(&f, (f64::NEG_INFINITY, f64::INFINITY), win, 401);
        assert!(!pls.is_empty());
        for pl in &pls {
            for p in &pl.pts {
                assert!(p.x >= -1.0 - 1e-9 && p.x <= 1.0 + 1e-9);
                assert!(((p.x).powi(2) + (p.y - 3.0).powi(2) - 1.0).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn identity_with_two_samples_is_one_segment() {
        let win = Window2::new(-1.0, 1.0, -1.0, 1.0);
        let pls = sample_function_graph(&|x| Some(x), (-1.0, 1.0), win, 2);
        assert_eq!(pls.len(), 1);
        assert_eq!(pls[0].pts, vec![Vec2::new(-1.0, -1.0), Vec2::new(1.0, 1.0)]);
    }

    #[test]
    fn half_line_clamps_to_the_window() {
        let win = Window2::new(-2.0, 2.0, -5.0, 5.0);
        let pls = sample_function_graph(&|x| Some(x), (0.0, f64::INFINITY), win, 64);
        assert_eq!(pls.len(), 1);
        let xs: Vec<f64> = pls[0].pts.iter().map(|p| p.x).collect();
        assert!(xs.first().unwrap().abs() < 1e-12);
        assert!((xs.last().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn empty_visible_domain() {
        let win = Window2::new(-2.0, 2.0, -2.0, 2.0);
        assert!(sample_function_graph(&|x| Some(x), (5.0, 9.0), win, 16).is_empty());
    }

    #[test]
    fn clipping_splits_out_of_window_excursions() {
        // V shape dipping below the window bottom
        let pl = Polyline2::new(
            vec![Vec2::new(-1.0, 0.5), Vec2::new(0.0, -3.0), Vec2::new(1.0, 0.5)],
            false,
        );
        let win = Window2::new(-1.0, 1.0, -1.0, 1.0);
        let parts = clip_polyline(&pl, win);
        assert_eq!(parts.len(), 2);
        for part in &parts {
            for p in &part.pts {
                assert!(win.contains(*p));
            }
        }
    }

    #[test]
    fn locus_sampler_splits_on_jumps_and_gaps() {
        let pls = sample_locus(100, 0.5, |t| {
            if (0.4..0.5).contains(&t) {
                None // undefined stretch
            } else if t < 0.7 {
                Some(Vec2::new(t, 0.0))
            } else {
                Some(Vec2::new(t, 10.0)) // jump branch
            }
        });
        assert_eq!(pls.len(), 3);
    }
}
