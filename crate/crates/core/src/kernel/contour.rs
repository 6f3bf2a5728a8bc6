//! Level-set extraction on a regular grid (marching squares).

use std::collections::HashMap;

use super::geom::{Polyline2, Vec2, Window2};

/// Corners where g - k is exactly zero are nudged positive so the 16-case
/// table stays total.
const ZERO_NUDGE: f64 = 1e-12;
/// Target residual |g - k| for crossing refinement.
const REFINE_TOL: f64 = 1e-9;
const REFINE_MAX_ITER: usize = 60;

/// Bisection along the segment a-b for a point with |g - k| <= 1e-9.
/// The endpoints must bracket the level (checked values may be the nudged
/// ones; an endpoint already within tolerance is returned unchanged).
pub fn refine_crossing(g: &dyn Fn(f64, f64) -> f64, k: f64, a: Vec2, b: Vec2) -> Vec2 {
    let va = g(a.x, a.y) - k;
    if va.abs() <= REFINE_TOL {
        return a;
    }
    let vb = g(b.x, b.y) - k;
    if vb.abs() <= REFINE_TOL {
        return b;
    }
    // initial placement by inverse linear interpolation
    let f = va / (va - vb);
    let lerp = a + (b - a) * f.clamp(0.0, 1.0);
    if (g(lerp.x, lerp.y) - k).abs() <= REFINE_TOL {
        return lerp;
    }
    let (mut lo, mut vlo, mut hi) = if va < 0.0 { (a, va, b) } else { (b, vb, a) };
    let mut best = lerp;
    for _ in 0..REFINE_MAX_ITER {
        let mid = (lo + hi) * 0.5;
        let vm = g(mid.x, mid.y) - k;
        best = mid;
        if vm.abs() <= REFINE_TOL {
            return mid;
        }
        if vm < 0.0 {
            lo = mid;
            vlo = vm;
        } else {
            hi = mid;
        }
    }
    let _ = vlo;
    best
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct EdgeId {
    i: usize,
    j: usize,
    vertical: bool,
}

/// Classic 16-case cell walk on sign(g - k) over an (nx × ny)-cell grid.
/// Crossing points are bisection-refined; segments sharing a grid edge reuse
/// the identical crossing point, so chaining is exact. Saddle cells (cases
/// 0101/1010) are resolved by the sign at the cell center. Cells with a
/// non-finite corner are skipped.
pub fn marching_squares(
    g: &dyn Fn(f64, f64) -> f64,
    k: f64,
    window: Window2,
    nx: usize,
    ny: usize,
) -> Vec<Polyline2> {
    assert!(nx >= 2 && ny >= 2, "grid must be at least 2x2");
    let dx = window.width() / nx as f64;
    let dy = window.height() / ny as f64;
    let xs: Vec<f64> = (0..=nx).map(|i| window.xmin + i as f64 * dx).collect();
    let ys: Vec<f64> = (0..=ny).map(|j| window.ymin + j as f64 * dy).collect();

    // corner values of g - k, with exact zeros nudged
    let mut vals = vec![f64::NAN; (nx + 1) * (ny + 1)];
    for j in 0..=ny {
        for i in 0..=nx {
            let v = g(xs[i], ys[j]) - k;
            vals[j * (nx + 1) + i] = if v == 0.0 { ZERO_NUDGE } else { v };
        }
    }
    let at = |i: usize, j: usize| vals[j * (nx + 1) + i];

    // crossing points, one per grid edge
    let mut crossings: Vec<Vec2> = Vec::new();
    let mut edge_point: HashMap<EdgeId, u32> = HashMap::new();
    let mut point_on = |edge: EdgeId, a: Vec2, b: Vec2, crossings: &mut Vec<Vec2>| -> u32 {
        *edge_point.entry(edge).or_insert_with(|| {
            let p = refine_crossing(g, k, a, b);
            crossings.push(p);
            crossings.len() as u32 - 1
        })
    };

    let mut segments: Vec<(u32, u32)> = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let corners = [at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)];
            if corners.iter().any(|v| !v.is_finite()) {
                continue;
            }
            let mut case = 0usize;
            for (bit, v) in corners.iter().enumerate() {
                if *v > 0.0 {
                    case |= 1 << bit;
                }
            }
            if case == 0 || case == 15 {
                continue;
            }
            let p = |c: usize| Vec2::new(xs[i + (c == 1 || c == 2) as usize], ys[j + (c >= 2) as usize]);
            // cell edges: B bottom, R right, T top, L left
            let bottom = EdgeId { i, j, vertical: false };
            let right = EdgeId { i: i + 1, j, vertical: true };
            let top = EdgeId { i, j: j + 1, vertical: false };
            let left = EdgeId { i, j, vertical: true };
            let mut cross = |e: EdgeId, ca: usize, cb: usize, crossings: &mut Vec<Vec2>| {
                point_on(e, p(ca), p(cb), crossings)
            };
            let mut emit = |pairs: &[((EdgeId, usize, usize), (EdgeId, usize, usize))],
                            crossings: &mut Vec<Vec2>,
                            segments: &mut Vec<(u32, u32)>| {
                for ((e1, a1, b1), (e2, a2, b2)) in pairs {
                    let u = cross(*e1, *a1, *b1, crossings);
                    let v = cross(*e2, *a2, *b2, crossings);
                    segments.push((u, v));
                }
            };
            let b = (bottom, 0, 1);
            let r = (right, 1, 2);
            let t = (top, 3, 2);
            let l = (left, 0, 3);
            match case {
                1 | 14 => emit(&[(b, l)], &mut crossings, &mut segments),
                2 | 13 => emit(&[(b, r)], &mut crossings, &mut segments),
                3 | 12 => emit(&[(l, r)], &mut crossings, &mut segments),
                4 | 11 => emit(&[(r, t)], &mut crossings, &mut segments),
                6 | 9 => emit(&[(b, t)], &mut crossings, &mut segments),
                7 | 8 => emit(&[(t, l)], &mut crossings, &mut segments),
                5 | 10 => {
                    // saddle: decide the pairing from the cell-center sample
                    let cx = 0.5 * (xs[i] + xs[i + 1]);
                    let cy = 0.5 * (ys[j] + ys[j + 1]);
                    let mut center = g(cx, cy) - k;
                    if center == 0.0 {
                        center = ZERO_NUDGE;
                    }
                    let center_pos = center > 0.0;
                    let connect_02 = (case == 5) == center_pos;
                    if connect_02 {
                        // diagonal through corners 0 and 2 is one region:
                        // isolate corners 1 and 3
                        emit(&[(b, r), (t, l)], &mut crossings, &mut segments);
                    } else {
                        emit(&[(b, l), (r, t)], &mut crossings, &mut segments);
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    chain_segments(&crossings, &segments)
}

/// Joins segments into maximal polylines. Every crossing point appears in at
/// most two segments, so open chains start at degree-1 points and the rest
/// are cycles; both are walked in first-seen order for determinism.
fn chain_segments(points: &[Vec2], segments: &[(u32, u32)]) -> Vec<Polyline2> {
    let mut adjacency: HashMap<u32, Vec<(usize, u32)>> = HashMap::new();
    for (si, (a, b)) in segments.iter().enumerate() {
        adjacency.entry(*a).or_default().push((si, *b));
        adjacency.entry(*b).or_default().push((si, *a));
    }
    let mut used = vec![false; segments.len()];
    let mut result = Vec::new();

    let walk = |start: u32, used: &mut Vec<bool>| -> Vec<u32> {
        let mut path = vec![start];
        let mut cur = start;
        loop {
            let Some(nexts) = adjacency.get(&cur) else { break };
            let mut advanced = false;
            for (si, other) in nexts {
                if !used[*si] {
                    used[*si] = true;
                    path.push(*other);
                    cur = *other;
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
        path
    };

    // open chains first
    let mut endpoints: Vec<u32> = adjacency
        .iter()
        .filter(|(_, v)| v.len() == 1)
        .map(|(k, _)| *k)
        .collect();
    endpoints.sort_unstable();
    for start in endpoints {
        if adjacency[&start].iter().all(|(si, _)| used[*si]) {
            continue;
        }
        let path = walk(start, &mut used);
        push_polyline(&mut result, points, &path, false);
    }
    // remaining cycles, in segment order
    for si in 0..segments.len() {
        if used[si] {
            continue;
        }
        used[si] = true;
        let (a, b) = segments[si];
        let mut path = vec![a, b];
        let mut cur = b;
        loop {
            let mut advanced = false;
            for (sj, other) in &adjacency[&cur] {
                if !used[*sj] {
                    used[*sj] = true;
                    path.push(*other);
                    cur = *other;
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
        let closed = path.len() > 2 && path.first() == path.last();
        if closed {
            path.pop();
        }
        push_polyline(&mut result, points, &path, closed);
    }
    result
}

fn push_polyline(out: &mut Vec<Polyline2>, points: &[Vec2], path: &[u32], closed: bool) {
    let mut pl = Polyline2 { pts: Vec::with_capacity(path.len()), closed };
    for id in path {
        pl.push(points[*id as usize]);
    }
    if pl.pts.len() >= 2 {
        out.push(pl);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle_field(x: f64, y: f64) -> f64 {
        x * x + y * y
    }

    #[test]
    fn unit_circle_is_one_closed_polyline() {
        let win = Window2::new(-2.0, 2.0, -2.0, 2.0);
        let out = marching_squares(&circle_field, 1.0, win, 200, 200);
        assert_eq!(out.len(), 1);
        assert!(out[0].closed);
        for p in &out[0].pts {
            assert!((p.norm() - 1.0).abs() <= 1e-6, "radius error {}", (p.norm() - 1.0).abs());
        }
    }

    #[test]
    fn empty_level_set() {
        let win = Window2::new(-2.0, 2.0, -2.0, 2.0);
        assert!(marching_squares(&circle_field, -1.0, win, 50, 50).is_empty());
    }

    #[test]
    fn saddle_produces_two_polylines_not_a_crossing() {
        // g = x·y at k = 0: level set is the two axes; quadrant signs are the
        // oracle (negative in II and IV), so the center-sample rule must give
        // exactly two polylines.
        let win = Window2::new(-2.0, 2.0, -2.0, 2.0);
        let out = marching_squares(&|x, y| x * y, 0.0, win, 200, 200);
        assert_eq!(out.len(), 2);
        for pl in &out {
            for p in &pl.pts {
                assert!(p.x.abs() <= 2e-2 || p.y.abs() <= 2e-2);
            }
        }
    }

    #[test]
    fn refinement_tightens_with_resolution() {
        // doubling the grid never increases the max residual at vertices
        let win = Window2::new(-2.0, 2.0, -2.0, 2.0);
        let g = |x: f64, y: f64| (x as f64).sin().powi(2) + (y as f64).cos().powi(2);
        let max_resid = |n: usize| {
            marching_squares(&g, 1.5, win, n, n)
                .iter()
                .flat_map(|pl| &pl.pts)
                .map(|p| (g(p.x, p.y) - 1.5).abs())
                .fold(0.0f64, f64::max)
        };
        let a = max_resid(100);
        let b = max_resid(200);
        assert!(a <= 1e-6 && b <= a);
    }

    #[test]
    fn non_finite_cells_are_skipped() {
        let g = |x: f64, y: f64| {
            if x > 0.0 {
                f64::NAN
            } else {
                x * x + y * y
            }
        };
        let win = Window2::new(-2.0, 2.0, -2.0, 2.0);
        let out = marching_squares(&g, 1.0, win, 64, 64);
        assert!(!out.is_empty());
        for pl in &out {
            for p in &pl.pts {
                assert!(p.x <= 0.5, "vertex in the NaN half-plane: {p:?}");
            }
        }
    }

    #[test]
    fn refine_crossing_examples() {
        let g = |x: f64, _y: f64| x;
        let p = refine_crossing(&g, 0.0, Vec2::new(-1.0, 0.0), Vec2::new(1.0, 0.0));
        assert!(p.x.abs() <= 1e-9);
        let cube = |x: f64, _y: f64| x * x * x;
        let p = refine_crossing(&cube, 0.0, Vec2::new(-1.0, 0.0), Vec2::new(1.0, 0.0));
        assert!(p.x.abs() <= 1e-3); // |x^3| <= 1e-9 means |x| <= 1e-3
        assert!(cube(p.x, 0.0).abs() <= 1e-9);
        // an endpoint that already satisfies the tolerance is returned as-is
        let a = Vec2::new(0.0, 0.0);
        let p = refine_crossing(&g, 0.0, a, Vec2::new(1.0, 0.0));
        assert_eq!(p, a);
    }
}
