//! Expression evaluation against a construction graph.
//!
//! Numeric semantics: 2D points are complex-capable (`*`, `/` and
//! reciprocals use complex arithmetic, `i` is the imaginary unit); scalars
//! promote to complex where mixed. NaN and infinite results become
//! `Undefined` and propagate without aborting. An expression whose only
//! unresolved identifiers are `x` (or `x` and `y`) evaluates to a function
//! value — that is how `Sequência(m x, m, -5, 5, 1)` yields function
//! elements.

use std::collections::HashMap;
use std::f64::consts::PI;

use thiserror::Error;

use crate::ast::{BinOp, Expr};
use crate::commands;
use crate::graph::{Construction, NodeId};
use crate::kernel::complex;
use crate::kernel::geom::{Vec2, Vec3};
use crate::value::{Env, Function1, Function2, GeoValue};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("unknown identifier `{0}`")]
    UnknownIdent(String),
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
    #[error("`{name}` expects {expected}, got {got} argument(s)")]
    Arity { name: String, expected: &'static str, got: usize },
    #[error("operator `{op}` is not defined for {lhs} and {rhs}")]
    TypeMismatch { op: char, lhs: &'static str, rhs: &'static str },
    #[error("`{func}` is not defined for {kind}")]
    FnMismatch { func: String, kind: &'static str },
    #[error("{name}: {message}")]
    Command { name: String, message: String },
    #[error("`∞` is only allowed as a domain endpoint of Função")]
    InfinityOutsideDomain,
    #[error("`{0}` is a {1}, not a function")]
    NotAFunction(String, &'static str),
}

impl EvalError {
    pub fn command(name: &str, message: impl Into<String>) -> Self {
        EvalError::Command { name: name.to_string(), message: message.into() }
    }
}

/// Scratch values layered over the graph during locus sweeps; lookups walk
/// the chain before falling back to committed node values.
pub struct Overlay<'a> {
    pub map: HashMap<NodeId, GeoValue>,
    pub parent: Option<&'a Overlay<'a>>,
}

impl<'a> Overlay<'a> {
    pub fn get(&self, id: NodeId) -> Option<&GeoValue> {
        self.map.get(&id).or_else(|| self.parent.and_then(|p| p.get(id)))
    }
}

/// Read-only evaluation context.
#[derive(Clone, Copy)]
pub struct EvalCtx<'a> {
    pub graph: &'a Construction,
    pub overlay: Option<&'a Overlay<'a>>,
}

impl<'a> EvalCtx<'a> {
    pub fn new(graph: &'a Construction) -> Self {
        EvalCtx { graph, overlay: None }
    }

    pub fn value_of(&self, id: NodeId) -> GeoValue {
        if let Some(ov) = self.overlay {
            if let Some(v) = ov.get(id) {
                return v.clone();
            }
        }
        self.graph.value(id).clone()
    }
}

fn env_lookup<'e>(env: &'e Env, name: &str) -> Option<&'e GeoValue> {
    env.iter().rev().find(|(n, _)| n == name).map(|(_, v)| v)
}

/// Names with built-in values: π, the imaginary unit, and the coordinate
/// axes (usable as reflection/revolution axes).
pub fn builtin_constant(name: &str) -> Option<GeoValue> {
    match name {
        "π" | "pi" => Some(GeoValue::Number(PI)),
        "i" => Some(GeoValue::Point2(Vec2::new(0.0, 1.0))),
        "EixoOx" | "xAxis" => {
            Some(GeoValue::Line2 { p: Vec2::new(0.0, 0.0), d: Vec2::new(1.0, 0.0) })
        }
        "EixoOy" | "yAxis" => {
            Some(GeoValue::Line2 { p: Vec2::new(0.0, 0.0), d: Vec2::new(0.0, 1.0) })
        }
        _ => None,
    }
}

pub fn is_infinity_name(name: &str) -> bool {
    matches!(name, "∞" | "inf")
}

/// A name the evaluator can always resolve without the graph.
pub fn is_reserved_name(name: &str) -> bool {
    builtin_constant(name).is_some() || is_infinity_name(name)
}

pub fn evaluate(ctx: &EvalCtx, env: &Env, expr: &Expr) -> Result<GeoValue, EvalError> {
    match expr {
        Expr::Number(v) => Ok(GeoValue::Number(*v)),
        Expr::Ident(name) => {
            if let Some(v) = env_lookup(env, name) {
                return Ok(v.clone());
            }
            if let Some(id) = ctx.graph.lookup(name) {
                return Ok(ctx.value_of(id));
            }
            if let Some(v) = builtin_constant(name) {
                return Ok(v);
            }
            if is_infinity_name(name) {
                return Err(EvalError::InfinityOutsideDomain);
            }
            Err(EvalError::UnknownIdent(name.clone()))
        }
        Expr::Call { name, args } => eval_call(ctx, env, name, args),
        Expr::Bin { op, lhs, rhs } => {
            let a = evaluate(ctx, env, lhs)?;
            let b = evaluate(ctx, env, rhs)?;
            binary(*op, &a, &b)
        }
        Expr::Neg(inner) => {
            let v = evaluate(ctx, env, inner)?;
            negate(&v)
        }
        Expr::Point(comps) => {
            let mut vals = Vec::with_capacity(comps.len());
            for c in comps {
                match evaluate(ctx, env, c)? {
                    GeoValue::Undefined => return Ok(GeoValue::Undefined),
                    v => match v.as_number() {
                        Some(x) => vals.push(x),
                        None => {
                            return Err(EvalError::FnMismatch {
                                func: "point literal".into(),
                                kind: v.kind_name(),
                            })
                        }
                    },
                }
            }
            Ok(match vals.len() {
                2 => GeoValue::point2(Vec2::new(vals[0], vals[1])),
                _ => GeoValue::point3(Vec3::new(vals[0], vals[1], vals[2])),
            })
        }
        Expr::List(items) => {
            let mut vals = Vec::with_capacity(items.len());
            for item in items {
                vals.push(evaluate(ctx, env, item)?);
            }
            Ok(GeoValue::List(vals.into()))
        }
        Expr::AbsBars(inner) => {
            let v = evaluate(ctx, env, inner)?;
            apply_scalar_fn("abs", &v)
        }
        Expr::Equation { var, rhs } => commands::equation_object(ctx, env, var, rhs),
    }
}

fn eval_call(ctx: &EvalCtx, env: &Env, name: &str, args: &[Expr]) -> Result<GeoValue, EvalError> {
    if commands::is_scalar_fn(name) {
        if args.len() != 1 {
            return Err(EvalError::Arity { name: name.into(), expected: "1", got: args.len() });
        }
        let v = evaluate(ctx, env, &args[0])?;
        return apply_scalar_fn(name, &v);
    }
    if let Some(axis) = commands::accessor(name) {
        if args.len() != 1 {
            return Err(EvalError::Arity { name: name.into(), expected: "1", got: args.len() });
        }
        let v = evaluate(ctx, env, &args[0])?;
        return Ok(match (axis, &v) {
            (0, GeoValue::Point2(p)) => GeoValue::Number(p.x),
            (1, GeoValue::Point2(p)) => GeoValue::Number(p.y),
            (2, GeoValue::Point2(_)) => GeoValue::Number(0.0),
            (0, GeoValue::Point3(p)) => GeoValue::Number(p.x),
            (1, GeoValue::Point3(p)) => GeoValue::Number(p.y),
            (2, GeoValue::Point3(p)) => GeoValue::Number(p.z),
            _ => GeoValue::Undefined,
        });
    }
    if let Some(cmd) = commands::canonical(name) {
        return commands::eval_command(ctx, env, cmd, name, args);
    }
    // user-defined function application
    let target = env_lookup(env, name)
        .cloned()
        .or_else(|| ctx.graph.lookup(name).map(|id| ctx.value_of(id)));
    match target {
        Some(GeoValue::Function1(f)) => {
            if args.len() != 1 {
                return Err(EvalError::Arity { name: name.into(), expected: "1", got: args.len() });
            }
            let arg = evaluate(ctx, env, &args[0])?;
            apply_function1(ctx, &f, arg)
        }
        Some(GeoValue::Function2(f)) => {
            if args.len() != 2 {
                return Err(EvalError::Arity { name: name.into(), expected: "2", got: args.len() });
            }
            let a = evaluate(ctx, env, &args[0])?;
            let b = evaluate(ctx, env, &args[1])?;
            apply_function2(ctx, &f, a, b)
        }
        Some(GeoValue::Undefined) => Ok(GeoValue::Undefined),
        Some(v) => Err(EvalError::NotAFunction(name.into(), v.kind_name())),
        None => Err(EvalError::UnknownCommand(name.into())),
    }
}

pub fn apply_function1(ctx: &EvalCtx, f: &Function1, arg: GeoValue) -> Result<GeoValue, EvalError> {
    let mut env = f.env.clone();
    env.push((f.var.clone(), arg));
    evaluate(ctx, &env, &f.body)
}

pub fn apply_function2(
    ctx: &EvalCtx,
    f: &Function2,
    a: GeoValue,
    b: GeoValue,
) -> Result<GeoValue, EvalError> {
    let mut env = f.env.clone();
    env.push((f.vars[0].clone(), a));
    env.push((f.vars[1].clone(), b));
    evaluate(ctx, &env, &f.body)
}

pub fn apply_scalar_fn(name: &str, v: &GeoValue) -> Result<GeoValue, EvalError> {
    if v.is_undefined() {
        return Ok(GeoValue::Undefined);
    }
    let Some(x) = v.as_number() else {
        return Err(EvalError::FnMismatch { func: name.to_string(), kind: v.kind_name() });
    };
    let y = match name {
        "sin" => x.sin(),
        "cos" => x.cos(),
        "tan" => x.tan(),
        "exp" => x.exp(),
        "ln" => x.ln(),
        "abs" => x.abs(),
        "sqrt" => x.sqrt(),
        "cbrt" | "cbrrt" => x.cbrt(),
        _ => unreachable!("not a scalar function: {name}"),
    };
    Ok(GeoValue::scalar(y))
}

fn negate(v: &GeoValue) -> Result<GeoValue, EvalError> {
    Ok(match v {
        GeoValue::Undefined => GeoValue::Undefined,
        GeoValue::Number(x) => GeoValue::Number(-x),
        GeoValue::Slider { v, .. } => GeoValue::Number(-v),
        GeoValue::Point2(p) => GeoValue::Point2(-*p),
        GeoValue::Point3(p) => GeoValue::Point3(-*p),
        other => {
            return Err(EvalError::TypeMismatch { op: '-', lhs: "nothing", rhs: other.kind_name() })
        }
    })
}

/// Numeric binary operators with scalar→complex promotion.
pub fn binary(op: BinOp, a: &GeoValue, b: &GeoValue) -> Result<GeoValue, EvalError> {
    use GeoValue as V;
    if a.is_undefined() || b.is_undefined() {
        return Ok(V::Undefined);
    }
    let sym = op.symbol();
    let mismatch = || EvalError::TypeMismatch { op: sym, lhs: a.kind_name(), rhs: b.kind_name() };

    // scalar ∘ scalar
    if let (Some(x), Some(y)) = (a.as_number(), b.as_number()) {
        let r = match op {
            BinOp::Add => x + y,
            BinOp::Sub => x - y,
            BinOp::Mul => x * y,
            BinOp::Div => x / y,
            BinOp::Pow => x.powf(y),
        };
        return Ok(V::scalar(r));
    }

    // complex plane: 2D points, with scalars promoted
    let complex_of = |v: &V| -> Option<Vec2> {
        match v {
            V::Point2(p) => Some(*p),
            _ => v.as_number().map(|x| Vec2::new(x, 0.0)),
        }
    };
    if matches!(a, V::Point2(_)) || matches!(b, V::Point2(_)) {
        if let (Some(z), Some(w)) = (complex_of(a), complex_of(b)) {
            return Ok(match op {
                BinOp::Add => V::point2(complex::cadd(z, w)),
                BinOp::Sub => V::point2(complex::csub(z, w)),
                BinOp::Mul => V::point2(complex::cmul(z, w)),
                BinOp::Div => match complex::cdiv(z, w) {
                    Some(q) => V::point2(q),
                    None => V::Undefined,
                },
                BinOp::Pow => return Err(mismatch()),
            });
        }
        return Err(mismatch());
    }

    // 3D points: ± componentwise, scalar scaling
    match (a, b, op) {
        (V::Point3(p), V::Point3(q), BinOp::Add) => Ok(V::point3(*p + *q)),
        (V::Point3(p), V::Point3(q), BinOp::Sub) => Ok(V::point3(*p - *q)),
        (V::Point3(p), _, BinOp::Mul) => match b.as_number() {
            Some(s) => Ok(V::point3(*p * s)),
            None => Err(mismatch()),
        },
        (_, V::Point3(q), BinOp::Mul) => match a.as_number() {
            Some(s) => Ok(V::point3(*q * s)),
            None => Err(mismatch()),
        },
        (V::Point3(p), _, BinOp::Div) => match b.as_number() {
            Some(s) => Ok(V::point3(*p / s)),
            None => Err(mismatch()),
        },
        _ => Err(mismatch()),
    }
}

/// Evaluates a domain-endpoint expression where `+∞` / `-∞` are legal.
pub fn eval_domain_endpoint(ctx: &EvalCtx, env: &Env, expr: &Expr) -> Result<f64, EvalError> {
    match expr {
        Expr::Ident(n) if is_infinity_name(n) => return Ok(f64::INFINITY),
        Expr::Neg(inner) => {
            if let Expr::Ident(n) = inner.as_ref() {
                if is_infinity_name(n) {
                    return Ok(f64::NEG_INFINITY);
                }
            }
        }
        _ => {}
    }
    let v = evaluate(ctx, env, expr)?;
    v.as_number().ok_or(EvalError::FnMismatch {
        func: "domain endpoint".into(),
        kind: v.kind_name(),
    })
}

/// Identifiers of `expr` that resolve neither in `env`, nor as objects,
/// constants or builtins — the candidates for function-variable promotion.
fn unresolved_vars(ctx: &EvalCtx, env: &Env, expr: &Expr) -> Vec<String> {
    let mut bound: Vec<String> = env.iter().map(|(n, _)| n.clone()).collect();
    let mut out: Vec<String> = Vec::new();
    commands::walk_free_idents(expr, &mut bound, &mut |name, is_call| {
        if is_call {
            return;
        }
        if ctx.graph.lookup(name).is_some() || is_reserved_name(name) {
            return;
        }
        if !out.iter().any(|n| n == name) {
            out.push(name.to_string());
        }
    });
    out
}

/// Evaluates `expr`; if its only unresolved identifiers are `x` (or `x` and
/// `y`), it becomes a function value closing over `env` instead.
pub fn eval_or_promote(ctx: &EvalCtx, env: &Env, expr: &Expr) -> Result<GeoValue, EvalError> {
    let mut vars = unresolved_vars(ctx, env, expr);
    vars.sort();
    match vars.as_slice() {
        [v] if v == "x" => Ok(GeoValue::Function1(
            Function1 {
                var: "x".into(),
                body: expr.clone(),
                env: env.clone(),
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            }
            .into(),
        )),
        [v, w] if v == "x" && w == "y" => Ok(GeoValue::Function2(
            Function2 {
                vars: ["x".into(), "y".into()],
                body: expr.clone(),
                env: env.clone(),
                domain: None,
            }
            .into(),
        )),
        _ => evaluate(ctx, env, expr),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::EvalConfig;

    fn ctx_graph() -> Construction {
        Construction::new(EvalConfig::default())
    }

    fn eval_str(graph: &Construction, src: &str) -> Result<GeoValue, EvalError> {
        let tokens = crate::lexer::tokenize(src, 1).unwrap();
        let stmt = crate::parser::parse_statement(&tokens).unwrap();
        let crate::ast::Statement::Bare(e) = stmt else { panic!("want bare expr") };
        evaluate(&EvalCtx::new(graph), &Vec::new(), &e)
    }

    #[test]
    fn complex_reciprocal_by_hand_division() {
        let g = ctx_graph();
        // 1/(1,1) = (1-i)/2
        let v = eval_str(&g, "1/(1, 1)").unwrap();
        assert_eq!(v, GeoValue::Point2(Vec2::new(0.5, -0.5)));
    }

    #[test]
    fn one_plus_i_is_a_complex_point() {
        let g = ctx_graph();
        assert_eq!(eval_str(&g, "1 + i").unwrap(), GeoValue::Point2(Vec2::new(1.0, 1.0)));
    }

    #[test]
    fn sqrt_of_negative_is_undefined() {
        let g = ctx_graph();
        assert!(eval_str(&g, "sqrt(-1)").unwrap().is_undefined());
    }

    #[test]
    fn division_by_zero_is_undefined_not_an_error() {
        let g = ctx_graph();
        assert!(eval_str(&g, "1/0").unwrap().is_undefined());
        assert!(eval_str(&g, "1/(0, 0)").unwrap().is_undefined());
    }

    #[test]
    fn polygon_plus_number_is_a_type_error() {
        let g = ctx_graph();
        let poly = GeoValue::Polygon2(vec![Vec2::default(); 3].into());
        let err = binary(BinOp::Add, &poly, &GeoValue::Number(1.0)).unwrap_err();
        assert_eq!(err, EvalError::TypeMismatch { op: '+', lhs: "Polygon", rhs: "Number" });
    }

    #[test]
    fn infinity_is_rejected_outside_domain_endpoints() {
        let g = ctx_graph();
        assert_eq!(eval_str(&g, "1 + ∞").unwrap_err(), EvalError::InfinityOutsideDomain);
    }

    #[test]
    fn accessors_on_non_points_are_undefined() {
        let g = ctx_graph();
        assert!(eval_str(&g, "x(3)").unwrap().is_undefined());
        assert_eq!(eval_str(&g, "z((1, 2))").unwrap(), GeoValue::Number(0.0));
    }

    #[test]
    fn free_x_promotes_to_a_function() {
        let g = ctx_graph();
        let tokens = crate::lexer::tokenize("x^2 + 1", 1).unwrap();
        let crate::ast::Statement::Bare(e) =
            crate::parser::parse_statement(&tokens).unwrap()
        else {
            panic!()
        };
        let v = eval_or_promote(&EvalCtx::new(&g), &Vec::new(), &e).unwrap();
        let GeoValue::Function1(f) = v else { panic!("expected function, got {v:?}") };
        let ctx = EvalCtx::new(&g);
        assert_eq!(apply_function1(&ctx, &f, GeoValue::Number(3.0)).unwrap(), GeoValue::Number(10.0));
    }

    #[test]
    fn cbrrt_typo_is_accepted() {
        let g = ctx_graph();
        assert_eq!(eval_str(&g, "cbrrt(27)").unwrap(), GeoValue::Number(3.0));
        assert_eq!(eval_str(&g, "cbrt(27)").unwrap(), GeoValue::Number(3.0));
    }
}
