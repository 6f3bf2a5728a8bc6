//! Property tests: pretty-print/parse round-trips, tokenization
//! faithfulness, complex-field laws, undefined propagation, tessellation
//! counting.

use proptest::prelude::*;

use ggs_core::ast::{BinOp, Expr};
use ggs_core::eval::{binary, evaluate, EvalCtx};
use ggs_core::graph::Construction;
use ggs_core::kernel::geom::{Vec2, Vec3};
use ggs_core::kernel::tessellate_surface;
use ggs_core::lexer::tokenize;
use ggs_core::parser::parse_statement;
use ggs_core::value::{EvalConfig, GeoValue};

fn ident_pool() -> impl Strategy<Value = String> {
    prop::sample::select(vec![
        "a".to_string(),
        "b".to_string(),
        "m".to_string(),
        "x".to_string(),
        "z_3".to_string(),
        "u1".to_string(),
        "π".to_string(),
    ])
}

fn call_name_pool() -> impl Strategy<Value = String> {
    prop::sample::select(vec![
        "f".to_string(),
        "g".to_string(),
        "sin".to_string(),
        "Função".to_string(),
        "Sequência".to_string(),
    ])
}

/// Random expression trees. Absolute-value bars never nest (the parser
/// cannot produce nested bars), number literals are nonnegative (the lexer
/// has no negative literals), and inline equations are excluded (they are
/// only legal in argument position).
fn arb_expr(inside_bars: bool) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..100000, 0u32..1000).prop_map(|(a, b)| Expr::Number(a as f64 / 100.0 + b as f64)),
        ident_pool().prop_map(Expr::Ident),
    ];
    leaf.prop_recursive(5, 64, 4, move |inner| {
        let bin = (
            prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow]),
            inner.clone(),
            inner.clone(),
        )
            .prop_map(|(op, l, r)| Expr::bin(op, l, r));
        let call = (call_name_pool(), prop::collection::vec(inner.clone(), 0..3))
            .prop_map(|(name, args)| Expr::Call { name, args });
        let point = prop::collection::vec(inner.clone(), 2..=3).prop_map(Expr::Point);
        let list = prop::collection::vec(inner.clone(), 0..3).prop_map(Expr::List);
        let neg = inner.clone().prop_map(|e| Expr::Neg(Box::new(e)));
        if inside_bars {
            prop_oneof![bin, call, point, list, neg].boxed()
        } else {
            let bars = inner.prop_map(|e| Expr::AbsBars(Box::new(strip_bars(e))));
            prop_oneof![bin, call, point, list, neg, bars].boxed()
        }
    })
}

/// Replaces any bars inside with an abs(...) call so generated trees hold
/// the non-nesting invariant.
fn strip_bars(e: Expr) -> Expr {
    match e {
        Expr::AbsBars(inner) => Expr::Call { name: "abs".into(), args: vec![strip_bars(*inner)] },
        Expr::Bin { op, lhs, rhs } => Expr::bin(op, strip_bars(*lhs), strip_bars(*rhs)),
        Expr::Neg(inner) => Expr::Neg(Box::new(strip_bars(*inner))),
        Expr::Call { name, args } => {
            Expr::Call { name, args: args.into_iter().map(strip_bars).collect() }
        }
        Expr::Point(cs) => Expr::Point(cs.into_iter().map(strip_bars).collect()),
        Expr::List(es) => Expr::List(es.into_iter().map(strip_bars).collect()),
        other => other,
    }
}

proptest! {
    /// Pretty-printing a parsed expression and re-parsing it yields a
    /// structurally identical expression.
    #[test]
    fn pretty_print_parse_round_trip(e in arb_expr(false)) {
        let printed = format!("q={e}");
        let tokens = tokenize(&printed, 1).unwrap();
        let stmt = parse_statement(&tokens).unwrap();
        let ggs_core::ast::Statement::Assign { expr, .. } = stmt else {
            panic!("expected assignment for {printed}");
        };
        prop_assert_eq!(expr, e, "source: {}", printed);
    }

    /// Token spans always reproduce the exact source slice.
    #[test]
    fn tokens_are_position_faithful(e in arb_expr(false)) {
        let printed = format!("{e}");
        let tokens = tokenize(&printed, 7).unwrap();
        for t in &tokens {
            prop_assert_eq!(&printed[t.span.0..t.span.1], t.lexeme.as_str());
            prop_assert_eq!(t.line, 7);
        }
        // concatenating lexemes with the original gaps rebuilds the line
        let mut rebuilt = String::new();
        let mut cursor = 0;
        for t in &tokens {
            rebuilt.push_str(&printed[cursor..t.span.0]);
            rebuilt.push_str(&t.lexeme);
            cursor = t.span.1;
        }
        rebuilt.push_str(&printed[cursor..]);
        prop_assert_eq!(rebuilt, printed);
    }

    /// z · (1/z) = 1 within 1e-12 for |z| > 1e-6.
    #[test]
    fn complex_reciprocal_law(re in -100.0f64..100.0, im in -100.0f64..100.0) {
        let z = Vec2::new(re, im);
        prop_assume!(z.norm() > 1e-6);
        let zv = GeoValue::Point2(z);
        let one_over = binary(BinOp::Div, &GeoValue::Number(1.0), &zv).unwrap();
        let prod = binary(BinOp::Mul, &zv, &one_over).unwrap();
        let GeoValue::Point2(p) = prod else { panic!() };
        prop_assert!((p.x - 1.0).abs() <= 1e-12 && p.y.abs() <= 1e-12);
    }

    /// (w · z) / z = w within 1e-9.
    #[test]
    fn complex_mul_div_cancel(
        wre in -50.0f64..50.0,
        wim in -50.0f64..50.0,
        zre in -50.0f64..50.0,
        zim in -50.0f64..50.0,
    ) {
        let z = Vec2::new(zre, zim);
        prop_assume!(z.norm() > 1e-6);
        let w = GeoValue::Point2(Vec2::new(wre, wim));
        let zv = GeoValue::Point2(z);
        let prod = binary(BinOp::Mul, &w, &zv).unwrap();
        let back = binary(BinOp::Div, &prod, &zv).unwrap();
        let (GeoValue::Point2(b), GeoValue::Point2(worig)) = (back, w) else { panic!() };
        prop_assert!(b.dist(worig) <= 1e-9 * (1.0 + worig.norm()));
    }

    /// Any operator with an undefined operand is undefined, never a crash.
    #[test]
    fn undefined_propagates(op in prop::sample::select(vec![
        BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow
    ]), v in -10.0f64..10.0) {
        let u = GeoValue::Undefined;
        let n = GeoValue::Number(v);
        prop_assert!(binary(op, &u, &n).unwrap().is_undefined());
        prop_assert!(binary(op, &n, &u).unwrap().is_undefined());
    }

    /// Tessellation counting: without welds, (nu+1)(nv+1) vertices and at
    /// most nu·nv faces.
    #[test]
    fn tessellation_counts(nu in 2usize..12, nv in 2usize..12) {
        let s = |u: f64, v: f64| Some(Vec3::new(u, v, (u * 3.0).sin() + v));
        let mesh = tessellate_surface(&s, (0.0, 1.0), (0.0, 1.0), nu, nv);
        prop_assert_eq!(mesh.vertices.len(), (nu + 1) * (nv + 1));
        prop_assert!(mesh.faces.len() <= nu * nv);
        prop_assert_eq!(mesh.faces.len(), nu * nv);
    }
}

#[test]
fn undefined_propagates_through_whole_expressions() {
    let g = Construction::new(EvalConfig::default());
    let ctx = EvalCtx::new(&g);
    let tokens = tokenize("(1 + sqrt(-1)) * 3 + 2", 1).unwrap();
    let ggs_core::ast::Statement::Bare(e) = parse_statement(&tokens).unwrap() else { panic!() };
    assert!(evaluate(&ctx, &Vec::new(), &e).unwrap().is_undefined());
}
