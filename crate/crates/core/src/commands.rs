//! Construction commands: the semantics behind every `Call` the scripts
//! make, mapped onto the geometry kernel.
//!
//! Command names are accepted in Portuguese (accented or not) and English;
//! lookups fold accents but keep case. Several commands are special forms:
//! they receive their arguments unevaluated, either because an argument is
//! a bound variable (`Sequência`, `Soma`, `Curva`, `SuperfícieLateral`,
//! `Função`), a face/edge designator (`Planificação`, `PontoFace`), or a
//! definition to re-evaluate while a driver sweeps (`Lugar_Geométrico`).

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::Arc;
use std::sync::OnceLock;

use crate::ast::Expr;
use crate::eval::{
    self, eval_domain_endpoint, evaluate, EvalCtx, EvalError, Overlay,
};
use crate::graph::NodeId;
use crate::kernel::geom::{Iso2, Vec2, Vec3};
use crate::kernel::{self, unfold, Spline2};
use crate::value::{
    ContourSet, CurveKind, Env, Function1, Function2, GeoValue, ParamCurve, ParamSurface,
    RevolveAxis,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cmd {
    Slider,
    Cube,
    Net,
    FacePoint,
    Function,
    Sequence,
    Sum,
    Element,
    Length,
    Curve,
    Surface,
    Spline,
    IntersectPath,
    Locus,
    Point,
    Midpoint,
    Segment,
    Polygon,
    Circle,
    PerpBisector,
    PerpLine,
    Reflect,
    SetColor,
    SetDynamicColor,
}

/// Strips the Portuguese diacritics that occur in command names; case is
/// preserved.
pub fn fold_accents(name: &str) -> String {
    name.chars()
        .map(|c| match c {
            'á' | 'à' | 'â' | 'ã' | 'ä' => 'a',
            'Á' | 'À' | 'Â' | 'Ã' | 'Ä' => 'A',
            'é' | 'è' | 'ê' | 'ë' => 'e',
            'É' | 'È' | 'Ê' | 'Ë' => 'E',
            'í' | 'ì' | 'î' | 'ï' => 'i',
            'Í' | 'Ì' | 'Î' | 'Ï' => 'I',
            'ó' | 'ò' | 'ô' | 'õ' | 'ö' => 'o',
            'Ó' | 'Ò' | 'Ô' | 'Õ' | 'Ö' => 'O',
            'ú' | 'ù' | 'û' | 'ü' => 'u',
            'Ú' | 'Ù' | 'Û' | 'Ü' => 'U',
            'ç' => 'c',
            'Ç' => 'C',
            _ => c,
        })
        .collect()
}

fn alias_table() -> &'static HashMap<&'static str, Cmd> {
    static TABLE: OnceLock<HashMap<&'static str, Cmd>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let entries: &[(&str, Cmd)] = &[
            ("Seletor", Cmd::Slider),
            ("Slider", Cmd::Slider),
            ("Cubo", Cmd::Cube),
            ("Cube", Cmd::Cube),
            ("Planificacao", Cmd::Net),
            ("Net", Cmd::Net),
            ("PontoFace", Cmd::FacePoint),
            ("FacePoint", Cmd::FacePoint),
            ("Funcao", Cmd::Function),
            ("Function", Cmd::Function),
            ("Sequencia", Cmd::Sequence),
            ("Sequence", Cmd::Sequence),
            ("Soma", Cmd::Sum),
            ("Sum", Cmd::Sum),
            ("Elemento", Cmd::Element),
            ("Element", Cmd::Element),
            ("Comprimento", Cmd::Length),
            ("Length", Cmd::Length),
            ("Curva", Cmd::Curve),
            ("Curve", Cmd::Curve),
            ("SuperficieLateral", Cmd::Surface),
            ("Surface", Cmd::Surface),
            ("Spline", Cmd::Spline),
            ("IntersecaoGeometrica", Cmd::IntersectPath),
            ("Interseccao", Cmd::IntersectPath),
            ("IntersectPath", Cmd::IntersectPath),
            ("Lugar_Geometrico", Cmd::Locus),
            ("Locus", Cmd::Locus),
            ("Ponto", Cmd::Point),
            ("Point", Cmd::Point),
            ("PontoMedio", Cmd::Midpoint),
            ("Midpoint", Cmd::Midpoint),
            ("Segmento", Cmd::Segment),
            ("Segment", Cmd::Segment),
            ("Poligono", Cmd::Polygon),
            ("Polygon", Cmd::Polygon),
            ("Circunferencia", Cmd::Circle),
            ("Circle", Cmd::Circle),
            ("Mediatriz", Cmd::PerpBisector),
            ("PerpendicularBisector", Cmd::PerpBisector),
            ("Perpendicular", Cmd::PerpLine),
            ("PerpendicularLine", Cmd::PerpLine),
            ("Reflexao", Cmd::Reflect),
            ("Reflect", Cmd::Reflect),
            ("DefinirCor", Cmd::SetColor),
            ("SetColor", Cmd::SetColor),
            ("DefinirCorDinamica", Cmd::SetDynamicColor),
            ("SetDynamicColor", Cmd::SetDynamicColor),
        ];
        let mut map = HashMap::new();
        for (name, cmd) in entries {
            let prev = map.insert(*name, *cmd);
            assert!(prev.is_none(), "duplicate command alias `{name}`");
        }
        map
    })
}

/// Resolves a written command name (any alias, accents optional) to its
/// operation.
pub fn canonical(name: &str) -> Option<Cmd> {
    alias_table().get(fold_accents(name).as_str()).copied()
}

pub fn is_scalar_fn(name: &str) -> bool {
    matches!(name, "sin" | "cos" | "tan" | "exp" | "ln" | "abs" | "sqrt" | "cbrt" | "cbrrt")
}

/// Coordinate accessors x(P), y(P), z(P) → component index.
pub fn accessor(name: &str) -> Option<usize> {
    match name {
        "x" => Some(0),
        "y" => Some(1),
        "z" => Some(2),
        _ => None,
    }
}

/// Commands that mutate style instead of defining an object.
pub fn is_action(cmd: Cmd) -> bool {
    matches!(cmd, Cmd::SetColor | Cmd::SetDynamicColor)
}

/// Checks a call's argument count at definition time.
pub fn check_arity(cmd: Cmd, argc: usize) -> Result<(), &'static str> {
    let ok = match cmd {
        Cmd::Slider => (3..=9).contains(&argc),
        Cmd::Cube => argc == 2,
        Cmd::Net => (2..=7).contains(&argc),
        Cmd::FacePoint => argc == 4,
        Cmd::Function => argc == 3 || argc == 7,
        Cmd::Sequence => argc == 5,
        Cmd::Sum => argc == 4,
        Cmd::Element => argc == 2,
        Cmd::Length => argc == 1,
        Cmd::Curve => (4..=6).contains(&argc),
        Cmd::Surface => argc == 3 || argc == 9,
        Cmd::Spline => (1..=2).contains(&argc),
        Cmd::IntersectPath => argc == 2,
        Cmd::Locus => argc == 2,
        Cmd::Point => (1..=2).contains(&argc),
        Cmd::Midpoint | Cmd::Segment | Cmd::Circle | Cmd::PerpBisector | Cmd::PerpLine
        | Cmd::Reflect => argc == 2,
        Cmd::Polygon => argc >= 3,
        Cmd::SetColor | Cmd::SetDynamicColor => argc == 4,
    };
    if ok {
        Ok(())
    } else {
        Err(match cmd {
            Cmd::Slider => "3 to 9 arguments",
            Cmd::Cube => "2 arguments",
            Cmd::Net => "2 to 7 arguments",
            Cmd::FacePoint => "4 arguments (net, face, s1, s2)",
            Cmd::Function => "3 or 7 arguments",
            Cmd::Sequence => "5 arguments",
            Cmd::Sum => "4 arguments",
            Cmd::Element => "2 arguments",
            Cmd::Length => "1 argument",
            Cmd::Curve => "4 to 6 arguments",
            Cmd::Surface => "3 or 9 arguments",
            Cmd::Spline => "1 or 2 arguments",
            Cmd::IntersectPath => "2 arguments",
            Cmd::Locus => "2 arguments",
            Cmd::Point => "1 or 2 arguments",
            Cmd::Polygon => "at least 3 points",
            _ => "2 arguments",
        })
    }
}

/// Argument indices never to resolve as values (face/edge names, variable
/// names, ignored slider extras).
fn raw_args(cmd: Cmd, argc: usize) -> Vec<usize> {
    match cmd {
        Cmd::Slider => (3..argc).collect(),
        Cmd::Net => (2..argc).collect(),
        Cmd::FacePoint => vec![1],
        Cmd::Sequence | Cmd::Sum => vec![1],
        Cmd::Function if argc == 7 => vec![1, 4],
        Cmd::Curve => match argc {
            4 => vec![1],
            5 => vec![2],
            _ => vec![3],
        },
        Cmd::Surface if argc == 9 => vec![3, 6],
        _ => Vec::new(),
    }
}

/// Bound variables a command introduces: (variable name, argument indices
/// it scopes over).
fn binders(cmd: Cmd, argc: usize, args: &[Expr]) -> Vec<(String, Vec<usize>)> {
    let var_at = |i: usize| -> Option<String> {
        match args.get(i) {
            Some(Expr::Ident(n)) => Some(n.clone()),
            _ => None,
        }
    };
    let mut out = Vec::new();
    match cmd {
        Cmd::Sequence | Cmd::Sum => {
            if let Some(v) = var_at(1) {
                out.push((v, vec![0]));
            }
        }
        Cmd::Curve => {
            let (vi, scope): (usize, Vec<usize>) = match argc {
                4 => (1, vec![0]),
                5 => (2, vec![0, 1]),
                _ => (3, vec![0, 1, 2]),
            };
            if let Some(v) = var_at(vi) {
                out.push((v, scope));
            }
        }
        Cmd::Surface if argc == 9 => {
            for vi in [3, 6] {
                if let Some(v) = var_at(vi) {
                    out.push((v, vec![0, 1, 2]));
                }
            }
        }
        Cmd::Function => {
            if argc == 3 {
                out.push(("x".to_string(), vec![0]));
            } else if argc == 7 {
                for vi in [1, 4] {
                    if let Some(v) = var_at(vi) {
                        out.push((v, vec![0]));
                    }
                }
            }
        }
        _ => {}
    }
    out
}

/// Visits every free identifier of `expr`. `visit(name, is_call)` is called
/// once per occurrence; `bound` holds names bound by enclosing binders.
/// Command-introduced variables (sequence/sum/curve/surface/function
/// parameters) are respected, raw arguments are skipped, and inline
/// equations bind x, y, z on their right-hand side.
pub fn walk_free_idents(
    expr: &Expr,
    bound: &mut Vec<String>,
    visit: &mut dyn FnMut(&str, bool),
) {
    match expr {
        Expr::Number(_) => {}
        Expr::Ident(n) => {
            if !bound.iter().any(|b| b == n) {
                visit(n, false);
            }
        }
        Expr::Call { name, args } => {
            visit(name, true);
            if let Some(cmd) = canonical(name) {
                let raw = raw_args(cmd, args.len());
                let binds = binders(cmd, args.len(), args);
                for (i, arg) in args.iter().enumerate() {
                    if raw.contains(&i) {
                        continue;
                    }
                    let here: Vec<&String> =
                        binds.iter().filter(|(_, scope)| scope.contains(&i)).map(|(v, _)| v).collect();
                    let added = here.len();
                    for v in here {
                        bound.push(v.clone());
                    }
                    walk_free_idents(arg, bound, visit);
                    for _ in 0..added {
                        bound.pop();
                    }
                }
            } else {
                for arg in args {
                    walk_free_idents(arg, bound, visit);
                }
            }
        }
        Expr::Bin { lhs, rhs, .. } => {
            walk_free_idents(lhs, bound, visit);
            walk_free_idents(rhs, bound, visit);
        }
        Expr::Neg(e) | Expr::AbsBars(e) => walk_free_idents(e, bound, visit),
        Expr::Point(es) | Expr::List(es) => {
            for e in es {
                walk_free_idents(e, bound, visit);
            }
        }
        Expr::Equation { rhs, .. } => {
            let n = bound.len();
            bound.extend(["x".to_string(), "y".to_string(), "z".to_string()]);
            walk_free_idents(rhs, bound, visit);
            bound.truncate(n);
        }
    }
}

// ---------------------------------------------------------------------------
// evaluation helpers
// ---------------------------------------------------------------------------

/// Evaluates an argument to a finite scalar; `Ok(None)` when undefined.
fn num_arg(ctx: &EvalCtx, env: &Env, name: &str, e: &Expr) -> Result<Option<f64>, EvalError> {
    let v = evaluate(ctx, env, e)?;
    if v.is_undefined() {
        return Ok(None);
    }
    match v.as_number() {
        Some(x) if x.is_finite() => Ok(Some(x)),
        Some(_) => Ok(None),
        None => Err(EvalError::FnMismatch { func: name.to_string(), kind: v.kind_name() }),
    }
}

fn raw_ident<'e>(name: &str, e: &'e Expr, what: &str) -> Result<&'e str, EvalError> {
    match e {
        Expr::Ident(n) => Ok(n),
        _ => Err(EvalError::command(name, format!("expected {what}"))),
    }
}

fn point2_arg(ctx: &EvalCtx, env: &Env, name: &str, e: &Expr) -> Result<Option<Vec2>, EvalError> {
    match evaluate(ctx, env, e)? {
        GeoValue::Undefined => Ok(None),
        GeoValue::Point2(p) => Ok(Some(p)),
        v => Err(EvalError::FnMismatch { func: name.to_string(), kind: v.kind_name() }),
    }
}

/// Evaluates a 2D curve at a parameter value, applying any post-isometries.
pub fn eval_curve2(ctx: &EvalCtx, curve: &ParamCurve, t: f64) -> Option<Vec2> {
    let mut p = match &curve.kind {
        CurveKind::Spline(sp) => sp.eval(t),
        CurveKind::Exprs(comps) => {
            if comps.len() != 2 {
                return None;
            }
            let mut env = curve.env.clone();
            env.push((curve.var.clone(), GeoValue::Number(t)));
            let x = evaluate(ctx, &env, &comps[0]).ok()?.as_number()?;
            let y = evaluate(ctx, &env, &comps[1]).ok()?.as_number()?;
            Vec2::new(x, y)
        }
    };
    for iso in &curve.post {
        p = iso.apply(p);
    }
    if p.is_finite() {
        Some(p)
    } else {
        None
    }
}

/// 3D curve evaluation (no post-isometries are defined for space curves).
pub fn eval_curve3(ctx: &EvalCtx, curve: &ParamCurve, t: f64) -> Option<Vec3> {
    match &curve.kind {
        CurveKind::Exprs(comps) if comps.len() == 3 => {
            let mut env = curve.env.clone();
            env.push((curve.var.clone(), GeoValue::Number(t)));
            let x = evaluate(ctx, &env, &comps[0]).ok()?.as_number()?;
            let y = evaluate(ctx, &env, &comps[1]).ok()?.as_number()?;
            let z = evaluate(ctx, &env, &comps[2]).ok()?.as_number()?;
            let p = Vec3::new(x, y, z);
            p.is_finite().then_some(p)
        }
        _ => None,
    }
}

/// Evaluates a parametric surface at (u, v).
pub fn eval_surface(ctx: &EvalCtx, surf: &ParamSurface, u: f64, v: f64) -> Option<Vec3> {
    match surf {
        ParamSurface::Exprs { comps, u: un, v: vn, env, .. } => {
            let mut e = env.clone();
            e.push((un.clone(), GeoValue::Number(u)));
            e.push((vn.clone(), GeoValue::Number(v)));
            let x = evaluate(ctx, &e, &comps[0]).ok()?.as_number()?;
            let y = evaluate(ctx, &e, &comps[1]).ok()?.as_number()?;
            let z = evaluate(ctx, &e, &comps[2]).ok()?.as_number()?;
            let p = Vec3::new(x, y, z);
            p.is_finite().then_some(p)
        }
        ParamSurface::Revolved { curve, axis, .. } => {
            let c = eval_curve2(ctx, curve, u)?;
            let (s, co) = v.sin_cos();
            let p = match axis {
                RevolveAxis::X => Vec3::new(c.x, c.y * co, c.y * s),
                RevolveAxis::Y => Vec3::new(c.x * co, c.y, c.x * s),
            };
            p.is_finite().then_some(p)
        }
    }
}

/// Evaluates a bivariate function as a scalar field, for contouring and
/// graph-surface rendering.
pub fn bivariate_field<'c>(
    ctx: &'c EvalCtx<'c>,
    f: &'c Function2,
) -> impl Fn(f64, f64) -> f64 + 'c {
    let slots = {
        let mut env = f.env.clone();
        env.push((f.vars[0].clone(), GeoValue::Number(0.0)));
        env.push((f.vars[1].clone(), GeoValue::Number(0.0)));
        RefCell::new(env)
    };
    move |x: f64, y: f64| {
        let mut env = slots.borrow_mut();
        let n = env.len();
        env[n - 2].1 = GeoValue::Number(x);
        env[n - 1].1 = GeoValue::Number(y);
        match evaluate(ctx, &env, &f.body) {
            Ok(v) => v.as_number().unwrap_or(f64::NAN),
            Err(_) => f64::NAN,
        }
    }
}

/// Position on a path object at normalized parameter t ∈ [0,1].
pub fn point_on_path(ctx: &EvalCtx, path: &GeoValue, t: f64) -> Result<GeoValue, EvalError> {
    let t = t.clamp(0.0, 1.0);
    Ok(match path {
        GeoValue::Undefined => GeoValue::Undefined,
        GeoValue::Circle { center, r } => {
            let a = TAU * t;
            GeoValue::point2(*center + Vec2::new(a.cos(), a.sin()) * *r)
        }
        GeoValue::Curve(c) => {
            let u = c.lo + t * (c.hi - c.lo);
            if c.dim() == 2 {
                match eval_curve2(ctx, c, u) {
                    Some(p) => GeoValue::point2(p),
                    None => GeoValue::Undefined,
                }
            } else {
                match eval_curve3(ctx, c, u) {
                    Some(p) => GeoValue::point3(p),
                    None => GeoValue::Undefined,
                }
            }
        }
        GeoValue::Segment2(a, b) => GeoValue::point2(*a + (*b - *a) * t),
        GeoValue::Segment3(a, b) => GeoValue::point3(*a + (*b - *a) * t),
        GeoValue::ContourSet(cs) => match cs.point_at(t) {
            Some(p) => GeoValue::point2(p),
            None => GeoValue::Undefined,
        },
        v => {
            return Err(EvalError::FnMismatch { func: "Ponto".into(), kind: v.kind_name() });
        }
    })
}

// ---------------------------------------------------------------------------
// command dispatch
// ---------------------------------------------------------------------------

pub fn eval_command(
    ctx: &EvalCtx,
    env: &Env,
    cmd: Cmd,
    name: &str,
    args: &[Expr],
) -> Result<GeoValue, EvalError> {
    if let Err(expected) = check_arity(cmd, args.len()) {
        return Err(EvalError::Arity { name: name.into(), expected, got: args.len() });
    }
    match cmd {
        Cmd::Slider => cmd_slider(ctx, env, name, args),
        Cmd::Cube => cmd_cube(ctx, env, name, args),
        Cmd::Net => cmd_net(ctx, env, name, args),
        Cmd::FacePoint => cmd_face_point(ctx, env, name, args),
        Cmd::Function => cmd_function(ctx, env, name, args),
        Cmd::Sequence => cmd_sequence(ctx, env, name, args),
        Cmd::Sum => cmd_sum(ctx, env, name, args),
        Cmd::Element => cmd_element(ctx, env, name, args),
        Cmd::Length => cmd_length(ctx, env, name, args),
        Cmd::Curve => cmd_curve(ctx, env, name, args),
        Cmd::Surface => cmd_surface(ctx, env, name, args),
        Cmd::Spline => cmd_spline(ctx, env, name, args),
        Cmd::IntersectPath => cmd_intersect(ctx, env, name, args),
        Cmd::Locus => cmd_locus(ctx, env, name, args),
        Cmd::Point => {
            let path = evaluate(ctx, env, &args[0])?;
            let t = if args.len() == 2 {
                match num_arg(ctx, env, name, &args[1])? {
                    Some(t) => t,
                    None => return Ok(GeoValue::Undefined),
                }
            } else {
                0.0
            };
            point_on_path(ctx, &path, t)
        }
        Cmd::Midpoint => cmd_midpoint(ctx, env, name, args),
        Cmd::Segment => cmd_segment(ctx, env, name, args),
        Cmd::Polygon => cmd_polygon(ctx, env, name, args),
        Cmd::Circle => {
            let (Some(c), Some(p)) = (
                point2_arg(ctx, env, name, &args[0])?,
                point2_arg(ctx, env, name, &args[1])?,
            ) else {
                return Ok(GeoValue::Undefined);
            };
            Ok(GeoValue::Circle { center: c, r: c.dist(p) })
        }
        Cmd::PerpBisector => {
            let (Some(a), Some(b)) = (
                point2_arg(ctx, env, name, &args[0])?,
                point2_arg(ctx, env, name, &args[1])?,
            ) else {
                return Ok(GeoValue::Undefined);
            };
            if a.dist(b) == 0.0 {
                return Err(EvalError::command(name, "points must be distinct"));
            }
            Ok(GeoValue::Line2 { p: (a + b) * 0.5, d: (b - a).perp() })
        }
        Cmd::PerpLine => {
            let Some(p) = point2_arg(ctx, env, name, &args[0])? else {
                return Ok(GeoValue::Undefined);
            };
            let through = evaluate(ctx, env, &args[1])?;
            let d = match &through {
                GeoValue::Line2 { d, .. } => *d,
                GeoValue::Segment2(a, b) => *b - *a,
                GeoValue::Undefined => return Ok(GeoValue::Undefined),
                v => {
                    return Err(EvalError::FnMismatch { func: name.into(), kind: v.kind_name() })
                }
            };
            Ok(GeoValue::Line2 { p, d: d.perp() })
        }
        Cmd::Reflect => cmd_reflect(ctx, env, name, args),
        Cmd::SetColor | Cmd::SetDynamicColor => {
            Err(EvalError::command(name, "style commands cannot be used inside expressions"))
        }
    }
}

fn cmd_slider(ctx: &EvalCtx, env: &Env, name: &str, args: &[Expr]) -> Result<GeoValue, EvalError> {
    let vals = [
        num_arg(ctx, env, name, &args[0])?,
        num_arg(ctx, env, name, &args[1])?,
        num_arg(ctx, env, name, &args[2])?,
    ];
    let (Some(min), Some(max), Some(step)) = (vals[0], vals[1], vals[2]) else {
        return Ok(GeoValue::Undefined);
    };
    if min >= max {
        return Err(EvalError::command(name, "needs min < max"));
    }
    if step <= 0.0 {
        return Err(EvalError::command(name, "needs increment > 0"));
    }
    Ok(GeoValue::Slider { v: min, min, max, step })
}

fn cmd_cube(ctx: &EvalCtx, env: &Env, name: &str, args: &[Expr]) -> Result<GeoValue, EvalError> {
    let mut pts = [Vec3::default(); 2];
    for (i, slot) in pts.iter_mut().enumerate() {
        *slot = match evaluate(ctx, env, &args[i])? {
            GeoValue::Point3(p) => p,
            GeoValue::Point2(p) => Vec3::new(p.x, p.y, 0.0),
            GeoValue::Undefined => return Ok(GeoValue::Undefined),
            v => return Err(EvalError::FnMismatch { func: name.into(), kind: v.kind_name() }),
        };
    }
    match unfold::cube_from_two_vertices(pts[0], pts[1]) {
        Ok(c) => Ok(GeoValue::Cube(Arc::new(c))),
        Err(e) => Err(EvalError::command(name, e.to_string())),
    }
}

fn cmd_net(ctx: &EvalCtx, env: &Env, name: &str, args: &[Expr]) -> Result<GeoValue, EvalError> {
    let cube = match evaluate(ctx, env, &args[0])? {
        GeoValue::Cube(c) => c,
        GeoValue::Undefined => return Ok(GeoValue::Undefined),
        v => return Err(EvalError::FnMismatch { func: name.into(), kind: v.kind_name() }),
    };
    let Some(t) = num_arg(ctx, env, name, &args[1])? else {
        return Ok(GeoValue::Undefined);
    };
    let (base, cuts) = if args.len() == 2 {
        (unfold::BASE_FACE, unfold::DEFAULT_CUTS.to_vec())
    } else {
        let face_name = raw_ident(name, &args[2], "a face name like faceABCD")?;
        let base = unfold::face_by_name(face_name)
            .map_err(|e| EvalError::command(name, e.to_string()))?;
        if args.len() == 3 {
            (base, default_cuts_for(base))
        } else {
            let mut cuts = Vec::with_capacity(args.len() - 3);
            for arg in &args[3..] {
                let edge_name = raw_ident(name, arg, "an edge name like arestaBC")?;
                let e = unfold::edge_by_name(edge_name)
                    .map_err(|e| EvalError::command(name, e.to_string()))?;
                if !cuts.contains(&e) {
                    cuts.push(e);
                }
            }
            (base, cuts)
        }
    };
    match unfold::compute_net(&cube, base, &cuts, t) {
        Ok(net) => Ok(GeoValue::Net(Arc::new(net))),
        Err(e) => Err(EvalError::command(name, e.to_string())),
    }
}

/// Cross-style default cuts for an explicit base face: cut everything not
/// incident to the base except one hinge for the opposite face.
fn default_cuts_for(base: usize) -> Vec<usize> {
    if base == unfold::BASE_FACE {
        return unfold::DEFAULT_CUTS.to_vec();
    }
    let base_verts = unfold::FACES[base];
    let touches_base =
        |e: &(u8, u8)| base_verts.contains(&e.0) && base_verts.contains(&e.1);
    let opposite: Vec<u8> =
        (0u8..8).filter(|v| !base_verts.contains(v)).collect();
    let on_opposite = |e: &(u8, u8)| opposite.contains(&e.0) && opposite.contains(&e.1);
    let mut cuts = Vec::new();
    let mut kept_top_hinge = false;
    for (i, e) in unfold::EDGES.iter().enumerate() {
        if touches_base(e) {
            continue;
        }
        if on_opposite(e) && !kept_top_hinge {
            kept_top_hinge = true;
            continue;
        }
        cuts.push(i);
    }
    cuts
}

fn cmd_face_point(
    ctx: &EvalCtx,
    env: &Env,
    name: &str,
    args: &[Expr],
) -> Result<GeoValue, EvalError> {
    let net = match evaluate(ctx, env, &args[0])? {
        GeoValue::Net(n) => n,
        GeoValue::Undefined => return Ok(GeoValue::Undefined),
        v => return Err(EvalError::FnMismatch { func: name.into(), kind: v.kind_name() }),
    };
    let face_name = raw_ident(name, &args[1], "a face name like faceABCD")?;
    let face =
        unfold::face_by_name(face_name).map_err(|e| EvalError::command(name, e.to_string()))?;
    let (Some(s1), Some(s2)) = (
        num_arg(ctx, env, name, &args[2])?,
        num_arg(ctx, env, name, &args[3])?,
    ) else {
        return Ok(GeoValue::Undefined);
    };
    Ok(GeoValue::point3(unfold::net_face_point(&net, face, s1, s2)))
}

fn cmd_function(ctx: &EvalCtx, env: &Env, name: &str, args: &[Expr]) -> Result<GeoValue, EvalError> {
    if args.len() == 3 {
        let lo = eval_domain_endpoint(ctx, env, &args[1])?;
        let hi = eval_domain_endpoint(ctx, env, &args[2])?;
        if lo > hi {
            return Err(EvalError::command(name, "domain start exceeds domain end"));
        }
        // the restricted variable is the single unresolved identifier of the
        // body (x by convention)
        let mut bound: Vec<String> = env.iter().map(|(n, _)| n.clone()).collect();
        let mut vars: Vec<String> = Vec::new();
        walk_free_idents(&args[0], &mut bound, &mut |n, is_call| {
            if !is_call
                && ctx.graph.lookup(n).is_none()
                && !eval::is_reserved_name(n)
                && !vars.iter().any(|v| v == n)
            {
                vars.push(n.to_string());
            }
        });
        let var = match vars.as_slice() {
            [] => "x".to_string(),
            [v] => v.clone(),
            _ => {
                return Err(EvalError::command(
                    name,
                    "restricted function must have a single free variable",
                ))
            }
        };
        return Ok(GeoValue::Function1(
            Function1 { var, body: args[0].clone(), env: env.clone(), lo, hi }.into(),
        ));
    }
    // 7-argument form: expr, var1, lo1, hi1, var2, lo2, hi2
    let v1 = raw_ident(name, &args[1], "a variable name")?.to_string();
    let v2 = raw_ident(name, &args[4], "a variable name")?.to_string();
    let lo1 = eval_domain_endpoint(ctx, env, &args[2])?;
    let hi1 = eval_domain_endpoint(ctx, env, &args[3])?;
    let lo2 = eval_domain_endpoint(ctx, env, &args[5])?;
    let hi2 = eval_domain_endpoint(ctx, env, &args[6])?;
    if lo1 > hi1 || lo2 > hi2 {
        return Err(EvalError::command(name, "domain start exceeds domain end"));
    }
    Ok(GeoValue::Function2(
        Function2 {
            vars: [v1, v2],
            body: args[0].clone(),
            env: env.clone(),
            domain: Some([lo1, hi1, lo2, hi2]),
        }
        .into(),
    ))
}

/// Element count of `Sequência(expr, var, from, to, step)`; guards the upper
/// endpoint against float drift so 0..2 by 1/50 has exactly 101 elements.
pub fn sequence_count(from: f64, to: f64, step: f64) -> usize {
    let ratio = (to - from) / step + 1e-12;
    if ratio < 0.0 {
        0
    } else {
        ratio.floor() as usize + 1
    }
}

fn cmd_sequence(ctx: &EvalCtx, env: &Env, name: &str, args: &[Expr]) -> Result<GeoValue, EvalError> {
    let var = raw_ident(name, &args[1], "a variable name")?.to_string();
    let (Some(from), Some(to), Some(step)) = (
        num_arg(ctx, env, name, &args[2])?,
        num_arg(ctx, env, name, &args[3])?,
        num_arg(ctx, env, name, &args[4])?,
    ) else {
        return Ok(GeoValue::Undefined);
    };
    if step == 0.0 {
        return Err(EvalError::command(name, "step must be nonzero"));
    }
    let count = sequence_count(from, to, step);
    let mut items = Vec::with_capacity(count);
    let mut inner = env.clone();
    inner.push((var, GeoValue::Number(from)));
    for idx in 0..count {
        let val = from + idx as f64 * step;
        inner.last_mut().unwrap().1 = GeoValue::Number(val);
        items.push(eval::eval_or_promote(ctx, &inner, &args[0])?);
    }
    Ok(GeoValue::List(items.into()))
}

fn cmd_sum(ctx: &EvalCtx, env: &Env, name: &str, args: &[Expr]) -> Result<GeoValue, EvalError> {
    let idx_var = raw_ident(name, &args[1], "an index variable")?.to_string();
    let (Some(lo), Some(hi)) = (
        num_arg(ctx, env, name, &args[2])?,
        num_arg(ctx, env, name, &args[3])?,
    ) else {
        return Ok(GeoValue::Undefined);
    };
    let start = lo.ceil() as i64;
    let end = (hi + 1e-9).floor() as i64;
    if end < start {
        return Ok(GeoValue::Number(0.0));
    }
    let mut acc = 0.0;
    let mut inner = env.clone();
    inner.push((idx_var, GeoValue::Number(0.0)));
    for i in start..=end {
        inner.last_mut().unwrap().1 = GeoValue::Number(i as f64);
        match evaluate(ctx, &inner, &args[0])? {
            GeoValue::Undefined => return Ok(GeoValue::Undefined),
            v => match v.as_number() {
                Some(x) => acc += x,
                None => {
                    return Err(EvalError::FnMismatch { func: name.into(), kind: v.kind_name() })
                }
            },
        }
    }
    Ok(GeoValue::scalar(acc))
}

fn cmd_element(ctx: &EvalCtx, env: &Env, name: &str, args: &[Expr]) -> Result<GeoValue, EvalError> {
    let list = match evaluate(ctx, env, &args[0])? {
        GeoValue::List(l) => l,
        GeoValue::Undefined => return Ok(GeoValue::Undefined),
        v => return Err(EvalError::FnMismatch { func: name.into(), kind: v.kind_name() }),
    };
    let Some(i) = num_arg(ctx, env, name, &args[1])? else {
        return Ok(GeoValue::Undefined);
    };
    let i = i.trunc() as i64; // 1-based
    if i < 1 || i as usize > list.len() {
        return Ok(GeoValue::Undefined);
    }
    Ok(list[i as usize - 1].clone())
}

fn cmd_length(ctx: &EvalCtx, env: &Env, name: &str, args: &[Expr]) -> Result<GeoValue, EvalError> {
    match evaluate(ctx, env, &args[0])? {
        GeoValue::List(l) => Ok(GeoValue::Number(l.len() as f64)),
        GeoValue::Undefined => Ok(GeoValue::Undefined),
        v => Err(EvalError::FnMismatch { func: name.into(), kind: v.kind_name() }),
    }
}

fn cmd_curve(ctx: &EvalCtx, env: &Env, name: &str, args: &[Expr]) -> Result<GeoValue, EvalError> {
    // point-literal form Curva((ex, ey), t, lo, hi) desugars to components
    let (comps, var_idx, lo_idx, hi_idx): (Vec<Expr>, usize, usize, usize) = match args.len() {
        4 => match &args[0] {
            Expr::Point(comps) => (comps.clone(), 1, 2, 3),
            _ => {
                return Err(EvalError::command(
                    name,
                    "4-argument form needs a point literal of components",
                ))
            }
        },
        5 => (vec![args[0].clone(), args[1].clone()], 2, 3, 4),
        _ => (vec![args[0].clone(), args[1].clone(), args[2].clone()], 3, 4, 5),
    };
    if comps.len() > 3 || comps.len() < 2 {
        return Err(EvalError::command(name, "curve needs 2 or 3 components"));
    }
    let var = raw_ident(name, &args[var_idx], "a parameter variable")?.to_string();
    let (Some(lo), Some(hi)) = (
        num_arg(ctx, env, name, &args[lo_idx])?,
        num_arg(ctx, env, name, &args[hi_idx])?,
    ) else {
        return Ok(GeoValue::Undefined);
    };
    if lo > hi {
        return Err(EvalError::command(name, "parameter start exceeds end"));
    }
    Ok(GeoValue::Curve(
        ParamCurve { kind: CurveKind::Exprs(comps), var, lo, hi, env: env.clone(), post: vec![] }
            .into(),
    ))
}

fn cmd_surface(ctx: &EvalCtx, env: &Env, name: &str, args: &[Expr]) -> Result<GeoValue, EvalError> {
    if args.len() == 9 {
        let u = raw_ident(name, &args[3], "a parameter variable")?.to_string();
        let v = raw_ident(name, &args[6], "a parameter variable")?.to_string();
        let (Some(lo1), Some(hi1), Some(lo2), Some(hi2)) = (
            num_arg(ctx, env, name, &args[4])?,
            num_arg(ctx, env, name, &args[5])?,
            num_arg(ctx, env, name, &args[7])?,
            num_arg(ctx, env, name, &args[8])?,
        ) else {
            return Ok(GeoValue::Undefined);
        };
        if lo1 > hi1 || lo2 > hi2 {
            return Ok(GeoValue::Undefined); // slider-driven ranges may transiently invert
        }
        return Ok(GeoValue::Surface(
            ParamSurface::Exprs {
                comps: [args[0].clone(), args[1].clone(), args[2].clone()],
                u,
                v,
                env: env.clone(),
                u_range: (lo1, hi1),
                v_range: (lo2, hi2),
            }
            .into(),
        ));
    }
    // revolve form: (curve, angle, axis)
    let curve = match evaluate(ctx, env, &args[0])? {
        GeoValue::Curve(c) if c.dim() == 2 => c,
        GeoValue::Undefined => return Ok(GeoValue::Undefined),
        GeoValue::Function1(f) => {
            // a function graph is a curve (x, f(x)) over its domain
            let body = f.body.clone();
            let var = f.var.clone();
            let (lo, hi) = (f.lo, f.hi);
            if !lo.is_finite() || !hi.is_finite() {
                return Err(EvalError::command(name, "cannot revolve an unbounded graph"));
            }
            Arc::new(ParamCurve {
                kind: CurveKind::Exprs(vec![Expr::Ident(var.clone()), body]),
                var,
                lo,
                hi,
                env: f.env.clone(),
                post: vec![],
            })
        }
        v => return Err(EvalError::FnMismatch { func: name.into(), kind: v.kind_name() }),
    };
    let Some(angle) = num_arg(ctx, env, name, &args[1])? else {
        return Ok(GeoValue::Undefined);
    };
    if !(angle > 0.0 && angle <= TAU + 1e-9) {
        return Err(EvalError::command(name, "revolution angle must be in (0, 2π]"));
    }
    if let Expr::Ident(n) = &args[2] {
        if matches!(n.as_str(), "EixoOz" | "zAxis") {
            return Err(EvalError::command(name, "axis must be EixoOx or EixoOy"));
        }
    }
    let axis = match evaluate(ctx, env, &args[2])? {
        GeoValue::Line2 { p, d } if p == Vec2::new(0.0, 0.0) && d == Vec2::new(1.0, 0.0) => {
            RevolveAxis::X
        }
        GeoValue::Line2 { p, d } if p == Vec2::new(0.0, 0.0) && d == Vec2::new(0.0, 1.0) => {
            RevolveAxis::Y
        }
        _ => return Err(EvalError::command(name, "axis must be EixoOx or EixoOy")),
    };
    Ok(GeoValue::Surface(ParamSurface::Revolved { curve, angle, axis }.into()))
}

fn cmd_spline(ctx: &EvalCtx, env: &Env, name: &str, args: &[Expr]) -> Result<GeoValue, EvalError> {
    let list = match evaluate(ctx, env, &args[0])? {
        GeoValue::List(l) => l,
        GeoValue::Undefined => return Ok(GeoValue::Undefined),
        v => return Err(EvalError::FnMismatch { func: name.into(), kind: v.kind_name() }),
    };
    if args.len() == 2 {
        let Some(order) = num_arg(ctx, env, name, &args[1])? else {
            return Ok(GeoValue::Undefined);
        };
        if (order - 3.0).abs() > 1e-9 {
            return Err(EvalError::command(name, "only cubic splines (order 3) are supported"));
        }
    }
    let mut pts = Vec::with_capacity(list.len());
    for item in list.iter() {
        match item {
            GeoValue::Point2(p) => pts.push(*p),
            GeoValue::Undefined => return Ok(GeoValue::Undefined),
            v => return Err(EvalError::FnMismatch { func: name.into(), kind: v.kind_name() }),
        }
    }
    match Spline2::fit(&pts) {
        Ok(sp) => Ok(GeoValue::Curve(
            ParamCurve {
                kind: CurveKind::Spline(sp),
                var: "t".into(),
                lo: 0.0,
                hi: 1.0,
                env: Vec::new(),
                post: vec![],
            }
            .into(),
        )),
        Err(e) => Err(EvalError::command(name, e.to_string())),
    }
}

fn cmd_intersect(ctx: &EvalCtx, env: &Env, name: &str, args: &[Expr]) -> Result<GeoValue, EvalError> {
    let plane = evaluate(ctx, env, &args[0])?;
    let surface = evaluate(ctx, env, &args[1])?;
    if plane.is_undefined() || surface.is_undefined() {
        return Ok(GeoValue::Undefined);
    }
    let k = match plane {
        GeoValue::Plane { a, b, c } if a.abs() <= 1e-12 && b.abs() <= 1e-12 => c,
        GeoValue::Plane { .. } => {
            return Err(EvalError::command(
                name,
                "only horizontal planes (z = k) are supported; general surface \
                 intersection is out of scope",
            ))
        }
        v => {
            return Err(EvalError::command(
                name,
                format!("first argument must be a plane z = k, got {}", v.kind_name()),
            ))
        }
    };
    let f2 = match &surface {
        GeoValue::GraphSurface(f) | GeoValue::Function2(f) => f.clone(),
        v => {
            return Err(EvalError::command(
                name,
                format!(
                    "second argument must be the graph surface of a bivariate function, got {}",
                    v.kind_name()
                ),
            ))
        }
    };
    let window = ctx.graph.config().window;
    let (nx, ny) = ctx.graph.config().contour_grid;
    let field = bivariate_field(ctx, &f2);
    let polylines = kernel::marching_squares(&field, k, window, nx, ny);
    Ok(GeoValue::ContourSet(Arc::new(ContourSet::new(polylines, k, window))))
}

fn cmd_midpoint(ctx: &EvalCtx, env: &Env, _name: &str, args: &[Expr]) -> Result<GeoValue, EvalError> {
    let a = evaluate(ctx, env, &args[0])?;
    let b = evaluate(ctx, env, &args[1])?;
    Ok(match (&a, &b) {
        (GeoValue::Undefined, _) | (_, GeoValue::Undefined) => GeoValue::Undefined,
        (GeoValue::Point2(p), GeoValue::Point2(q)) => GeoValue::point2((*p + *q) * 0.5),
        (GeoValue::Point3(p), GeoValue::Point3(q)) => GeoValue::point3((*p + *q) * 0.5),
        _ => {
            return Err(EvalError::TypeMismatch {
                op: ',',
                lhs: a.kind_name(),
                rhs: b.kind_name(),
            })
        }
    })
}

fn cmd_segment(ctx: &EvalCtx, env: &Env, name: &str, args: &[Expr]) -> Result<GeoValue, EvalError> {
    let a = evaluate(ctx, env, &args[0])?;
    let b = evaluate(ctx, env, &args[1])?;
    Ok(match (&a, &b) {
        (GeoValue::Undefined, _) | (_, GeoValue::Undefined) => GeoValue::Undefined,
        (GeoValue::Point2(p), GeoValue::Point2(q)) => GeoValue::Segment2(*p, *q),
        (GeoValue::Point3(p), GeoValue::Point3(q)) => GeoValue::Segment3(*p, *q),
        _ => {
            return Err(EvalError::FnMismatch {
                func: name.into(),
                kind: if matches!(a, GeoValue::Point2(_) | GeoValue::Point3(_)) {
                    b.kind_name()
                } else {
                    a.kind_name()
                },
            })
        }
    })
}

fn cmd_polygon(ctx: &EvalCtx, env: &Env, name: &str, args: &[Expr]) -> Result<GeoValue, EvalError> {
    let mut p2 = Vec::new();
    let mut p3 = Vec::new();
    for arg in args {
        match evaluate(ctx, env, arg)? {
            GeoValue::Point2(p) => p2.push(p),
            GeoValue::Point3(p) => p3.push(p),
            GeoValue::Undefined => return Ok(GeoValue::Undefined),
            v => return Err(EvalError::FnMismatch { func: name.into(), kind: v.kind_name() }),
        }
    }
    match (p2.is_empty(), p3.is_empty()) {
        (false, true) => Ok(GeoValue::Polygon2(p2.into())),
        (true, false) => Ok(GeoValue::Polygon3(p3.into())),
        _ => Err(EvalError::command(name, "vertices must all be 2D or all be 3D")),
    }
}

fn cmd_reflect(ctx: &EvalCtx, env: &Env, name: &str, args: &[Expr]) -> Result<GeoValue, EvalError> {
    let obj = evaluate(ctx, env, &args[0])?;
    let mirror = evaluate(ctx, env, &args[1])?;
    let GeoValue::Line2 { p, d } = mirror else {
        if mirror.is_undefined() {
            return Ok(GeoValue::Undefined);
        }
        return Err(EvalError::command(name, "mirror must be a line"));
    };
    let iso = Iso2::reflection(p, d);
    Ok(match obj {
        GeoValue::Undefined => GeoValue::Undefined,
        GeoValue::Point2(q) => GeoValue::point2(iso.apply(q)),
        GeoValue::Segment2(a, b) => GeoValue::Segment2(iso.apply(a), iso.apply(b)),
        GeoValue::Circle { center, r } => GeoValue::Circle { center: iso.apply(center), r },
        GeoValue::Line2 { p: lp, d: ld } => {
            GeoValue::Line2 { p: iso.apply(lp), d: iso.apply(lp + ld) - iso.apply(lp) }
        }
        GeoValue::Polygon2(pts) => {
            GeoValue::Polygon2(pts.iter().map(|q| iso.apply(*q)).collect::<Vec<_>>().into())
        }
        GeoValue::Curve(c) if c.dim() == 2 => {
            let mut curve = (*c).clone();
            curve.post.push(iso);
            GeoValue::Curve(Arc::new(curve))
        }
        v => return Err(EvalError::FnMismatch { func: name.into(), kind: v.kind_name() }),
    })
}

// ---------------------------------------------------------------------------
// equations: z = f(x, y)
// ---------------------------------------------------------------------------

/// Value of a labeled equation `label: z = rhs` (or an inline `z = rhs`
/// argument): a plane when the right side is syntactically affine in x and
/// y after constant-folding object references, a graph surface otherwise.
pub fn equation_object(
    ctx: &EvalCtx,
    env: &Env,
    var: &str,
    rhs: &Expr,
) -> Result<GeoValue, EvalError> {
    if var != "z" {
        return Err(EvalError::command(
            "equation",
            format!("only z = f(x, y) equations are supported, got `{var} = ...`"),
        ));
    }
    let mut forms = HashMap::new();
    forms.insert("x".to_string(), (1.0, 0.0, 0.0));
    forms.insert("y".to_string(), (0.0, 1.0, 0.0));
    if let Some((a, b, c)) = try_affine(ctx, env, rhs, &forms, 0)? {
        return Ok(GeoValue::Plane { a, b, c });
    }
    Ok(GeoValue::GraphSurface(
        Function2 {
            vars: ["x".into(), "y".into()],
            body: rhs.clone(),
            env: env.clone(),
            domain: None,
        }
        .into(),
    ))
}

/// Linear form a·x + b·y + c of an expression, or None when it is not
/// syntactically affine. `forms` maps variable names to linear forms, which
/// lets user-function calls be inlined with substituted arguments.
fn try_affine(
    ctx: &EvalCtx,
    env: &Env,
    expr: &Expr,
    forms: &HashMap<String, (f64, f64, f64)>,
    depth: usize,
) -> Result<Option<(f64, f64, f64)>, EvalError> {
    if depth > 16 {
        return Ok(None);
    }
    // a subtree not touching any tracked variable folds to a constant
    let mut touches = false;
    {
        let mut bound = Vec::new();
        walk_free_idents(expr, &mut bound, &mut |n, is_call| {
            if !is_call && forms.contains_key(n) {
                touches = true;
            }
        });
    }
    if !touches {
        return Ok(match evaluate(ctx, env, expr) {
            Ok(v) => v.as_number().map(|c| (0.0, 0.0, c)),
            Err(_) => None,
        });
    }
    use crate::ast::BinOp;
    Ok(match expr {
        Expr::Ident(n) => forms.get(n).copied(),
        Expr::Neg(e) => {
            try_affine(ctx, env, e, forms, depth + 1)?.map(|(a, b, c)| (-a, -b, -c))
        }
        Expr::Bin { op: BinOp::Add, lhs, rhs } => {
            match (
                try_affine(ctx, env, lhs, forms, depth + 1)?,
                try_affine(ctx, env, rhs, forms, depth + 1)?,
            ) {
                (Some(l), Some(r)) => Some((l.0 + r.0, l.1 + r.1, l.2 + r.2)),
                _ => None,
            }
        }
        Expr::Bin { op: BinOp::Sub, lhs, rhs } => {
            match (
                try_affine(ctx, env, lhs, forms, depth + 1)?,
                try_affine(ctx, env, rhs, forms, depth + 1)?,
            ) {
                (Some(l), Some(r)) => Some((l.0 - r.0, l.1 - r.1, l.2 - r.2)),
                _ => None,
            }
        }
        Expr::Bin { op: BinOp::Mul, lhs, rhs } => {
            match (
                try_affine(ctx, env, lhs, forms, depth + 1)?,
                try_affine(ctx, env, rhs, forms, depth + 1)?,
            ) {
                (Some((0.0, 0.0, s)), Some(r)) => Some((s * r.0, s * r.1, s * r.2)),
                (Some(l), Some((0.0, 0.0, s))) => Some((s * l.0, s * l.1, s * l.2)),
                _ => None,
            }
        }
        Expr::Bin { op: BinOp::Div, lhs, rhs } => {
            match (
                try_affine(ctx, env, lhs, forms, depth + 1)?,
                try_affine(ctx, env, rhs, forms, depth + 1)?,
            ) {
                (Some(l), Some((0.0, 0.0, s))) if s != 0.0 => Some((l.0 / s, l.1 / s, l.2 / s)),
                _ => None,
            }
        }
        Expr::Call { name, args } if canonical(name).is_none() && !is_scalar_fn(name) => {
            // inline a user-defined function with substituted arguments
            let Some(id) = ctx.graph.lookup(name) else { return Ok(None) };
            let target = ctx.value_of(id);
            let (params, body, fenv): (Vec<String>, Expr, Env) = match &target {
                GeoValue::Function1(f) if args.len() == 1 => {
                    (vec![f.var.clone()], f.body.clone(), f.env.clone())
                }
                GeoValue::Function2(f) if args.len() == 2 => {
                    (f.vars.to_vec(), f.body.clone(), f.env.clone())
                }
                _ => return Ok(None),
            };
            let mut inner = HashMap::new();
            for (p, a) in params.iter().zip(args) {
                match try_affine(ctx, env, a, forms, depth + 1)? {
                    Some(form) => {
                        inner.insert(p.clone(), form);
                    }
                    None => return Ok(None),
                }
            }
            try_affine(ctx, &fenv, &body, &inner, depth + 1)?
        }
        _ => None,
    })
}

// ---------------------------------------------------------------------------
// loci
// ---------------------------------------------------------------------------

fn cmd_locus(ctx: &EvalCtx, env: &Env, name: &str, args: &[Expr]) -> Result<GeoValue, EvalError> {
    let driver_name = match &args[1] {
        Expr::Ident(n) => n,
        _ => {
            return Err(EvalError::command(
                name,
                "driver must be a named slider or a point on a path",
            ))
        }
    };
    let Some(driver) = ctx.graph.lookup(driver_name) else {
        return Err(EvalError::UnknownIdent(driver_name.clone()));
    };

    // the dependent must reach the driver through dependency edges
    let bound: Vec<String> = env.iter().map(|(n, _)| n.clone()).collect();
    let mut dep_ids = Vec::new();
    {
        let mut b = bound.clone();
        walk_free_idents(&args[0], &mut b, &mut |n, _| {
            if let Some(id) = ctx.graph.lookup(n) {
                if !dep_ids.contains(&id) {
                    dep_ids.push(id);
                }
            }
        });
    }
    let needed = ctx.graph.ancestors_closure(&dep_ids);
    if !needed.contains(&driver) {
        return Err(EvalError::command(name, "dependent does not depend on the driver"));
    }

    // cone: descendants of the driver that the dependent actually needs
    let descendants = ctx.graph.descendants(driver);
    let cone: Vec<NodeId> = ctx
        .graph
        .topo_order(&descendants)
        .into_iter()
        .filter(|id| needed.contains(id))
        .collect();

    let driver_value = ctx.value_of(driver);
    enum Sweep {
        Slider { min: f64, max: f64, step: f64 },
        Path(GeoValue),
    }
    let sweep = match &driver_value {
        GeoValue::Slider { min, max, step, .. } => {
            Sweep::Slider { min: *min, max: *max, step: *step }
        }
        GeoValue::Point2(_) | GeoValue::Point3(_) | GeoValue::Undefined => {
            let Some(path_expr) = ctx.graph.point_on_path_expr(driver) else {
                return Err(EvalError::command(
                    name,
                    "driver must be a slider or a point defined with Ponto(path, ...)",
                ));
            };
            Sweep::Path(evaluate(ctx, &Vec::new(), path_expr)?)
        }
        v => {
            return Err(EvalError::command(
                name,
                format!("driver must be a slider or a point on a path, got {}", v.kind_name()),
            ))
        }
    };

    let n = ctx.graph.config().locus_samples;
    let jump = 0.1 * ctx.graph.config().window.diagonal();
    let polylines = kernel::sample_locus(n, jump, |t| {
        let driven = match &sweep {
            Sweep::Slider { min, max, step } => {
                GeoValue::Slider { v: min + t * (max - min), min: *min, max: *max, step: *step }
            }
            Sweep::Path(path) => point_on_path(ctx, path, t).ok()?,
        };
        let mut overlay = Overlay { map: HashMap::new(), parent: ctx.overlay };
        overlay.map.insert(driver, driven);
        for &node in &cone {
            let scratch = EvalCtx { graph: ctx.graph, overlay: Some(&overlay) };
            let v = ctx.graph.eval_definition(&scratch, node).unwrap_or(GeoValue::Undefined);
            overlay.map.insert(node, v);
        }
        let scratch = EvalCtx { graph: ctx.graph, overlay: Some(&overlay) };
        match evaluate(&scratch, env, &args[0]) {
            Ok(GeoValue::Point2(p)) => Some(p),
            _ => None,
        }
    });
    Ok(GeoValue::Locus(Arc::new(polylines)))
}
