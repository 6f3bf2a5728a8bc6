//! Runtime values of construction objects.

use std::sync::Arc;

use crate::ast::Expr;
use crate::kernel::geom::{Iso2, Polyline2, RigidTransform, Vec2, Vec3, Window2};
use crate::kernel::spline::Spline2;

/// Captured bindings for function closures and sequence elements.
pub type Env = Vec<(String, GeoValue)>;

/// Target drawing sheet of an object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum View {
    D2,
    D2Second,
    D3,
}

impl View {
    pub fn parse(s: &str) -> Option<View> {
        match s {
            "2d" => Some(View::D2),
            "2d2" => Some(View::D2Second),
            "3d" => Some(View::D3),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            View::D2 => "2d",
            View::D2Second => "2d2",
            View::D3 => "3d",
        }
    }
}

/// Univariate function with a (possibly infinite) domain restriction.
#[derive(Debug, Clone, PartialEq)]
pub struct Function1 {
    pub var: String,
    pub body: Expr,
    pub env: Env,
    pub lo: f64,
    pub hi: f64,
}

/// Bivariate function; `domain` is a rectangle `[lo1,hi1]×[lo2,hi2]` or
/// `None` for all of the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Function2 {
    pub vars: [String; 2],
    pub body: Expr,
    pub env: Env,
    pub domain: Option<[f64; 4]>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CurveKind {
    /// Component expressions (2 or 3) of the parameter variable.
    Exprs(Vec<Expr>),
    /// Piecewise-cubic interpolating spline in the plane.
    Spline(Spline2),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamCurve {
    pub kind: CurveKind,
    pub var: String,
    pub lo: f64,
    pub hi: f64,
    pub env: Env,
    /// Planar isometries applied after evaluation (outermost last); lets
    /// reflections stay exact instead of resampling.
    pub post: Vec<Iso2>,
}

impl ParamCurve {
    pub fn dim(&self) -> usize {
        match &self.kind {
            CurveKind::Exprs(c) => c.len(),
            CurveKind::Spline(_) => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RevolveAxis {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamSurface {
    /// S(u,v) = (x(u,v), y(u,v), z(u,v)) over a parameter rectangle.
    Exprs {
        comps: [Expr; 3],
        u: String,
        v: String,
        env: Env,
        u_range: (f64, f64),
        v_range: (f64, f64),
    },
    /// Surface of revolution of a planar curve about a coordinate axis;
    /// v ranges over [0, angle].
    Revolved { curve: Arc<ParamCurve>, angle: f64, axis: RevolveAxis },
}

impl ParamSurface {
    pub fn u_range(&self) -> (f64, f64) {
        match self {
            ParamSurface::Exprs { u_range, .. } => *u_range,
            ParamSurface::Revolved { curve, .. } => (curve.lo, curve.hi),
        }
    }

    pub fn v_range(&self) -> (f64, f64) {
        match self {
            ParamSurface::Exprs { v_range, .. } => *v_range,
            ParamSurface::Revolved { angle, .. } => (0.0, *angle),
        }
    }
}

/// A cube by its eight vertices. Vertex i carries the letter 'A' + i; the
/// base face is ABCD and the top face EFGH.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubeData {
    pub verts: [Vec3; 8],
}

impl CubeData {
    pub fn edge_length(&self) -> f64 {
        self.verts[0].dist(self.verts[1])
    }
}

/// An unfolding state of a cube: one rigid placement per face.
#[derive(Debug, Clone, PartialEq)]
pub struct NetData {
    pub cube: CubeData,
    pub t: f64,
    pub transforms: [RigidTransform; 6],
    /// Placed face quads, in canonical face order.
    pub quads: [[Vec3; 4]; 6],
    /// Hinge-tree parent of each face (`None` for the base face).
    pub parent: [Option<u8>; 6],
}

/// Extracted level set `g = k`, with cached arc-length tables so that
/// point-on-path lookups are O(log n).
#[derive(Debug, Clone, PartialEq)]
pub struct ContourSet {
    pub polylines: Vec<Polyline2>,
    pub k: f64,
    pub window: Window2,
    /// Per polyline: cumulative length at each vertex (plus the closing
    /// edge for closed polylines).
    cum: Vec<Vec<f64>>,
    total_len: f64,
}

impl ContourSet {
    pub fn new(polylines: Vec<Polyline2>, k: f64, window: Window2) -> Self {
        let mut cum = Vec::with_capacity(polylines.len());
        let mut total = 0.0;
        for pl in &polylines {
            let mut acc = Vec::with_capacity(pl.pts.len() + 1);
            let mut s = 0.0;
            acc.push(0.0);
            for w in pl.pts.windows(2) {
                s += w[0].dist(w[1]);
                acc.push(s);
            }
            if pl.closed && pl.pts.len() > 1 {
                s += pl.pts[pl.pts.len() - 1].dist(pl.pts[0]);
                acc.push(s);
            }
            total += s;
            cum.push(acc);
        }
        ContourSet { polylines, k, window, cum, total_len: total }
    }

    pub fn is_empty(&self) -> bool {
        self.polylines.is_empty() || self.total_len == 0.0
    }

    pub fn total_length(&self) -> f64 {
        self.total_len
    }

    /// Position at normalized arc length `t ∈ [0,1]` along the polylines
    /// concatenated in construction order.
    pub fn point_at(&self, t: f64) -> Option<Vec2> {
        if self.is_empty() {
            return None;
        }
        let mut target = t.clamp(0.0, 1.0) * self.total_len;
        for (pl, acc) in self.polylines.iter().zip(&self.cum) {
            let len = *acc.last().unwrap();
            if target > len {
                target -= len;
                continue;
            }
            let seg = match acc.binary_search_by(|s| s.partial_cmp(&target).unwrap()) {
                Ok(i) => i.min(acc.len() - 2),
                Err(i) => i.saturating_sub(1).min(acc.len() - 2),
            };
            let a = pl.pts[seg];
            let b = pl.pts[(seg + 1) % pl.pts.len()];
            let span = acc[seg + 1] - acc[seg];
            let f = if span > 0.0 { (target - acc[seg]) / span } else { 0.0 };
            return Some(a + (b - a) * f);
        }
        let last = self.polylines.last().unwrap();
        Some(if last.closed { last.pts[0] } else { *last.pts.last().unwrap() })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeoValue {
    /// Propagating non-value; suppresses rendering instead of aborting.
    Undefined,
    Number(f64),
    Slider { v: f64, min: f64, max: f64, step: f64 },
    Point2(Vec2),
    Point3(Vec3),
    Function1(Arc<Function1>),
    Function2(Arc<Function2>),
    Curve(Arc<ParamCurve>),
    Surface(Arc<ParamSurface>),
    /// z = a·x + b·y + c.
    Plane { a: f64, b: f64, c: f64 },
    /// Graph of a bivariate expression, rendered over the view window.
    GraphSurface(Arc<Function2>),
    Segment2(Vec2, Vec2),
    Segment3(Vec3, Vec3),
    Line2 { p: Vec2, d: Vec2 },
    Circle { center: Vec2, r: f64 },
    Polygon2(Arc<Vec<Vec2>>),
    Polygon3(Arc<Vec<Vec3>>),
    Cube(Arc<CubeData>),
    Net(Arc<NetData>),
    List(Arc<Vec<GeoValue>>),
    ContourSet(Arc<ContourSet>),
    Locus(Arc<Vec<Polyline2>>),
}

impl GeoValue {
    /// Finite scalars become numbers; NaN/±inf become `Undefined`.
    pub fn scalar(v: f64) -> GeoValue {
        if v.is_finite() {
            GeoValue::Number(v)
        } else {
            GeoValue::Undefined
        }
    }

    pub fn point2(p: Vec2) -> GeoValue {
        if p.is_finite() {
            GeoValue::Point2(p)
        } else {
            GeoValue::Undefined
        }
    }

    pub fn point3(p: Vec3) -> GeoValue {
        if p.is_finite() {
            GeoValue::Point3(p)
        } else {
            GeoValue::Undefined
        }
    }

    pub fn is_undefined(&self) -> bool {
        matches!(self, GeoValue::Undefined)
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            GeoValue::Number(v) => Some(*v),
            GeoValue::Slider { v, .. } => Some(*v),
            _ => None,
        }
    }

    /// Kind label used in error messages.
    pub fn kind_name(&self) -> &'static str {
        match self {
            GeoValue::Undefined => "Undefined",
            GeoValue::Number(_) => "Number",
            GeoValue::Slider { .. } => "Slider",
            GeoValue::Point2(_) => "Point",
            GeoValue::Point3(_) => "Point3D",
            GeoValue::Function1(_) => "Function",
            GeoValue::Function2(_) => "BivariateFunction",
            GeoValue::Curve(_) => "Curve",
            GeoValue::Surface(_) => "Surface",
            GeoValue::Plane { .. } => "Plane",
            GeoValue::GraphSurface(_) => "GraphSurface",
            GeoValue::Segment2(..) | GeoValue::Segment3(..) => "Segment",
            GeoValue::Line2 { .. } => "Line",
            GeoValue::Circle { .. } => "Circle",
            GeoValue::Polygon2(_) | GeoValue::Polygon3(_) => "Polygon",
            GeoValue::Cube(_) => "Cube",
            GeoValue::Net(_) => "Net",
            GeoValue::List(_) => "List",
            GeoValue::ContourSet(_) => "ContourSet",
            GeoValue::Locus(_) => "Locus",
        }
    }

    /// Whether the value lives naturally in the 3D view.
    pub fn is_3d(&self) -> bool {
        match self {
            GeoValue::Point3(_)
            | GeoValue::Function2(_)
            | GeoValue::Surface(_)
            | GeoValue::Plane { .. }
            | GeoValue::GraphSurface(_)
            | GeoValue::Segment3(..)
            | GeoValue::Polygon3(_)
            | GeoValue::Cube(_)
            | GeoValue::Net(_) => true,
            GeoValue::Curve(c) => c.dim() == 3,
            GeoValue::List(items) => items.iter().any(|v| v.is_3d()),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ColorSpec {
    Static([f64; 3]),
    /// Channel expressions evaluated after each recompute; results are
    /// clamped to [0,1].
    Dynamic(Box<[Expr; 3]>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StyleSpec {
    pub color: ColorSpec,
    pub visible: bool,
    pub width: f64,
}

impl Default for StyleSpec {
    fn default() -> Self {
        StyleSpec { color: ColorSpec::Static([0.0, 0.0, 0.0]), visible: true, width: 1.5 }
    }
}

/// Numeric knobs for rendering and sampling; all CLI-overridable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    pub window: Window2,
    pub contour_grid: (usize, usize),
    pub tessellation: (usize, usize),
    pub curve_samples: usize,
    pub locus_samples: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            window: Window2::default(),
            contour_grid: (200, 200),
            tessellation: (64, 64),
            curve_samples: 512,
            locus_samples: 512,
        }
    }
}
