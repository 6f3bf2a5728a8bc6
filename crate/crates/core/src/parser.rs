//! Statement and expression parser.
//!
//! Statement classification, in precedence order: view directive; then
//! `label: var = expr` (equation); then `name(p1, ..)=expr` with bare
//! identifier parameters (function definition); then `name=expr` or
//! `name: expr` (assignment); otherwise a bare expression. `name(...)` in
//! expressions is always a call — whether it is a builtin, a user function
//! or an error is decided at evaluation time.

use crate::ast::{BinOp, Expr, Line, Script, Statement, UNARY_MINUS_BP};
use crate::diag::Diagnostic;
use crate::lexer::{tokenize, Token, TokenKind};

/// Parses a whole script source. `#` starts a comment, `#view 2d|2d2|3d`
/// switches the active view. On any error, every line diagnostic is
/// reported and no script is returned.
pub fn parse_script(source: &str) -> Result<Script, Vec<Diagnostic>> {
    let mut script = Script::default();
    let mut diags = Vec::new();
    for (idx, raw) in source.lines().enumerate() {
        let line_no = idx as u32 + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        match tokenize(line, line_no) {
            Ok(tokens) if tokens.is_empty() => {}
            Ok(tokens) => match parse_statement(&tokens) {
                Ok(stmt) => script.lines.push(Line { stmt, line: line_no }),
                Err(d) => diags.push(d),
            },
            Err(d) => diags.push(d),
        }
    }
    if diags.is_empty() {
        Ok(script)
    } else {
        Err(diags)
    }
}

/// Parses the tokens of one logical line.
pub fn parse_statement(tokens: &[Token]) -> Result<Statement, Diagnostic> {
    if let [tok] = tokens {
        if tok.kind == TokenKind::Directive {
            return match tok.lexeme.as_str() {
                "2d" | "2d2" | "3d" => Ok(Statement::ViewDirective(tok.lexeme.clone())),
                other => Err(Diagnostic::new(
                    tok.line,
                    tok.col,
                    format!("unknown view `{other}` (expected 2d, 2d2 or 3d)"),
                )),
            };
        }
    }

    let mut p = Parser::new(tokens);

    // label: ...
    if p.peek_ident().is_some() && p.peek_at(1).map_or(false, |t| t.is_punct(':')) {
        let label = p.next().unwrap().lexeme.clone();
        p.next(); // ':'
        // label: var = expr
        if p.peek_ident().is_some() && p.peek_at(1).map_or(false, |t| t.is_op('=')) {
            let var = p.next().unwrap().lexeme.clone();
            let eq = p.next().unwrap().clone();
            if !matches!(var.as_str(), "x" | "y" | "z") {
                return Err(Diagnostic::new(
                    eq.line,
                    eq.col,
                    format!("equation left-hand side must be x, y or z, got `{var}`"),
                ));
            }
            let rhs = p.parse_expr(0)?;
            p.expect_end()?;
            return Ok(Statement::EquationDef { label, var, rhs });
        }
        // label: expr  (names the value, like `A: (0, 0, h(0, 0))`)
        let expr = p.parse_expr(0)?;
        p.expect_end()?;
        return Ok(Statement::Assign { name: label, expr });
    }

    // name(params) = expr
    if let Some(stmt) = try_function_def(tokens)? {
        return Ok(stmt);
    }

    // name = expr
    if p.peek_ident().is_some() && p.peek_at(1).map_or(false, |t| t.is_op('=')) {
        let name = p.next().unwrap().lexeme.clone();
        p.next(); // '='
        let expr = p.parse_expr(0)?;
        p.expect_end()?;
        return Ok(Statement::Assign { name, expr });
    }

    let expr = p.parse_expr(0)?;
    p.expect_end()?;
    Ok(Statement::Bare(expr))
}

/// Recognizes `name(id, id, ...) = body` where every parameter is a bare,
/// distinct identifier. Anything else falls through to the other forms.
fn try_function_def(tokens: &[Token]) -> Result<Option<Statement>, Diagnostic> {
    let mut i = 0;
    let name = match tokens.get(i) {
        Some(t) if t.kind == TokenKind::Ident => t.lexeme.clone(),
        _ => return Ok(None),
    };
    i += 1;
    if !tokens.get(i).map_or(false, |t| t.is_punct('(')) {
        return Ok(None);
    }
    i += 1;
    let mut params = Vec::new();
    loop {
        match tokens.get(i) {
            Some(t) if t.kind == TokenKind::Ident => {
                params.push((t.lexeme.clone(), t.line, t.col));
                i += 1;
            }
            _ => return Ok(None),
        }
        match tokens.get(i) {
            Some(t) if t.is_punct(',') => i += 1,
            Some(t) if t.is_punct(')') => {
                i += 1;
                break;
            }
            _ => return Ok(None),
        }
    }
    if !tokens.get(i).map_or(false, |t| t.is_op('=')) {
        return Ok(None);
    }
    for (k, (pk, line, col)) in params.iter().enumerate() {
        if params[..k].iter().any(|(q, _, _)| q == pk) {
            return Err(Diagnostic::new(*line, *col, format!("duplicate parameter `{pk}`")));
        }
    }
    let mut p = Parser::new(&tokens[i + 1..]);
    let body = p.parse_expr(0)?;
    p.expect_end()?;
    Ok(Some(Statement::FunctionDef {
        name,
        params: params.into_iter().map(|(n, _, _)| n).collect(),
        body,
    }))
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    inside_bars: bool,
}

impl<'a> Parser<'a> {
    fn new(tokens: &'a [Token]) -> Self {
        Parser { tokens, pos: 0, inside_bars: false }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, n: usize) -> Option<&Token> {
        self.tokens.get(self.pos + n)
    }

    fn peek_ident(&self) -> Option<&Token> {
        self.peek().filter(|t| t.kind == TokenKind::Ident)
    }

    fn next(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn prev(&self) -> Option<&Token> {
        if self.pos == 0 {
            None
        } else {
            self.tokens.get(self.pos - 1)
        }
    }

    fn err_here(&self, msg: impl Into<String>) -> Diagnostic {
        match self.peek() {
            Some(t) => Diagnostic::new(t.line, t.col, msg),
            None => {
                let (line, col) = self
                    .tokens
                    .last()
                    .map(|t| (t.line, t.col + t.lexeme.chars().count() as u32))
                    .unwrap_or((1, 1));
                Diagnostic::new(line, col, msg)
            }
        }
    }

    fn expect_punct(&mut self, c: char) -> Result<(), Diagnostic> {
        if self.peek().map_or(false, |t| t.is_punct(c)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err_here(format!("expected `{c}`")))
        }
    }

    fn expect_end(&self) -> Result<(), Diagnostic> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(self.err_here("unexpected token"))
        }
    }

    fn parse_expr(&mut self, min_bp: u8) -> Result<Expr, Diagnostic> {
        let mut lhs = self.parse_prefix()?;
        loop {
            let Some(tok) = self.peek() else { break };
            let op = match tok.kind {
                TokenKind::Op('+') => Some(BinOp::Add),
                TokenKind::Op('-') => Some(BinOp::Sub),
                TokenKind::Op('*') => Some(BinOp::Mul),
                TokenKind::Op('/') => Some(BinOp::Div),
                TokenKind::Op('^') => Some(BinOp::Pow),
                _ => None,
            };
            if let Some(op) = op {
                let (lbp, rbp) = op.binding();
                if lbp < min_bp {
                    break;
                }
                self.pos += 1;
                let rhs = self.parse_expr(rbp)?;
                lhs = Expr::bin(op, lhs, rhs);
                continue;
            }
            if self.implicit_mul_fires() {
                let (lbp, rbp) = BinOp::Mul.binding();
                if lbp < min_bp {
                    break;
                }
                let rhs = self.parse_expr(rbp)?;
                lhs = Expr::bin(BinOp::Mul, lhs, rhs);
                continue;
            }
            break;
        }
        Ok(lhs)
    }

    /// Implicit multiplication between the token just consumed and the next
    /// one. Fires for `number·ident`, `number·(`, `)·ident`, ident·ident when
    /// separated by a space, any value followed by a Greek-letter identifier,
    /// and a value followed by opening `|`. It never fires across `,`, `=`,
    /// `:` or a call-opening `(` — those tokens end the left operand instead.
    fn implicit_mul_fires(&self) -> bool {
        let (Some(prev), Some(next)) = (self.prev(), self.peek()) else {
            return false;
        };
        let prev_is_value_end = matches!(
            prev.kind,
            TokenKind::Number | TokenKind::Ident | TokenKind::Punct(')' | ']' | '|' | '}')
        );
        if !prev_is_value_end {
            return false;
        }
        match next.kind {
            TokenKind::Ident => match prev.kind {
                TokenKind::Number => true,
                TokenKind::Punct(')') | TokenKind::Punct(']') | TokenKind::Punct('|') => true,
                TokenKind::Ident => next.space_before || next.is_symbol_ident(),
                _ => false,
            },
            TokenKind::Punct('(') => matches!(prev.kind, TokenKind::Number),
            TokenKind::Punct('|') => !self.inside_bars,
            _ => false,
        }
    }

    fn parse_prefix(&mut self) -> Result<Expr, Diagnostic> {
        let Some(tok) = self.peek() else {
            return Err(self.err_here("unexpected end of line"));
        };
        match tok.kind {
            TokenKind::Op('-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.parse_expr(UNARY_MINUS_BP)?)))
            }
            TokenKind::Op('+') => {
                // unary plus, identity
                self.pos += 1;
                self.parse_expr(UNARY_MINUS_BP)
            }
            TokenKind::Number => {
                let lexeme = tok.lexeme.clone();
                let (line, col) = (tok.line, tok.col);
                self.pos += 1;
                lexeme
                    .parse::<f64>()
                    .map(Expr::Number)
                    .map_err(|_| Diagnostic::new(line, col, format!("bad number `{lexeme}`")))
            }
            TokenKind::Ident => {
                let name = tok.lexeme.clone();
                self.pos += 1;
                if let Some(open) = self.peek().and_then(|t| match t.kind {
                    TokenKind::Punct('(') => Some(('(', ')')),
                    TokenKind::Punct('[') => Some(('[', ']')),
                    _ => None,
                }) {
                    self.pos += 1;
                    let args = self.parse_args(open.1)?;
                    return Ok(Expr::Call { name, args });
                }
                Ok(Expr::Ident(name))
            }
            TokenKind::Punct('(') => {
                self.pos += 1;
                let first = self.parse_expr(0)?;
                if self.peek().map_or(false, |t| t.is_punct(',')) {
                    let mut comps = vec![first];
                    while self.peek().map_or(false, |t| t.is_punct(',')) {
                        self.pos += 1;
                        comps.push(self.parse_expr(0)?);
                    }
                    self.expect_punct(')')?;
                    if comps.len() > 3 {
                        return Err(self.err_here("point literal has 2 or 3 components"));
                    }
                    return Ok(Expr::Point(comps));
                }
                self.expect_punct(')')?;
                Ok(first)
            }
            TokenKind::Punct('{') => {
                self.pos += 1;
                let mut items = Vec::new();
                if self.peek().map_or(false, |t| t.is_punct('}')) {
                    self.pos += 1;
                    return Ok(Expr::List(items));
                }
                loop {
                    items.push(self.parse_expr(0)?);
                    if self.peek().map_or(false, |t| t.is_punct(',')) {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                self.expect_punct('}')?;
                Ok(Expr::List(items))
            }
            TokenKind::Punct('|') => {
                if self.inside_bars {
                    return Err(self.err_here("absolute-value bars do not nest; use abs(...)"));
                }
                self.pos += 1;
                self.inside_bars = true;
                let inner = self.parse_expr(0)?;
                self.inside_bars = false;
                self.expect_punct('|')?;
                Ok(Expr::AbsBars(Box::new(inner)))
            }
            _ => Err(self.err_here(format!("unexpected `{}`", tok.lexeme))),
        }
    }

    fn parse_args(&mut self, close: char) -> Result<Vec<Expr>, Diagnostic> {
        let mut args = Vec::new();
        if self.peek().map_or(false, |t| t.is_punct(close)) {
            self.pos += 1;
            return Ok(args);
        }
        loop {
            args.push(self.parse_arg()?);
            if self.peek().map_or(false, |t| t.is_punct(',')) {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.expect_punct(close)?;
        Ok(args)
    }

    /// A call argument; `var = expr` here is an inline equation.
    fn parse_arg(&mut self) -> Result<Expr, Diagnostic> {
        if self.peek_ident().is_some() && self.peek_at(1).map_or(false, |t| t.is_op('=')) {
            let var = self.next().unwrap().lexeme.clone();
            self.pos += 1; // '='
            let rhs = self.parse_expr(0)?;
            return Ok(Expr::Equation { var, rhs: Box::new(rhs) });
        }
        self.parse_expr(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::Expr as E;

    fn stmt(src: &str) -> Statement {
        parse_statement(&tokenize(src, 1).unwrap()).unwrap()
    }

    fn expr(src: &str) -> Expr {
        match stmt(&format!("q={src}")) {
            Statement::Assign { expr, .. } => expr,
            other => panic!("expected assignment, got {other:?}"),
        }
    }

    #[test]
    fn function_def_with_implicit_product() {
        let s = stmt("f(x)=m x");
        assert_eq!(
            s,
            Statement::FunctionDef {
                name: "f".into(),
                params: vec!["x".into()],
                body: E::bin(BinOp::Mul, E::Ident("m".into()), E::Ident("x".into())),
            }
        );
    }

    #[test]
    fn restricted_function_call() {
        let s = stmt("g(x)=Função(x^2,0,+∞)");
        let Statement::FunctionDef { name, params, body } = s else { panic!() };
        assert_eq!(name, "g");
        assert_eq!(params, vec!["x".to_string()]);
        let E::Call { name, args } = body else { panic!() };
        assert_eq!(name, "Função");
        assert_eq!(args.len(), 3);
        assert_eq!(args[2], E::Ident("∞".into()));
    }

    #[test]
    fn incomplete_statement_errors_at_line_end() {
        let err = parse_statement(&tokenize("x=", 1).unwrap()).unwrap_err();
        assert!(err.message.contains("unexpected end of line"));
        assert_eq!(err.col, 3);
    }

    #[test]
    fn equation_definition() {
        assert_eq!(
            stmt("p: z=k"),
            Statement::EquationDef {
                label: "p".into(),
                var: "z".into(),
                rhs: E::Ident("k".into())
            }
        );
        let err = parse_statement(&tokenize("p: w=k", 1).unwrap()).unwrap_err();
        assert!(err.message.contains("must be x, y or z"));
    }

    #[test]
    fn labeled_point_is_an_assignment() {
        let s = stmt("A: (0, 0, h(0, 0))");
        let Statement::Assign { name, expr } = s else { panic!() };
        assert_eq!(name, "A");
        assert!(matches!(expr, E::Point(ref c) if c.len() == 3));
    }

    #[test]
    fn bracket_call_syntax() {
        let s = stmt("p00=Planificação[Cb, t]");
        let Statement::Assign { expr: E::Call { name, args }, .. } = s else { panic!() };
        assert_eq!(name, "Planificação");
        assert_eq!(args.len(), 2);
    }

    #[test]
    fn inline_equation_argument() {
        let e = expr("Sequência(InterseçãoGeométrica(z=k, M), k, 0, 2, 1/50)");
        let E::Call { args, .. } = e else { panic!() };
        let E::Call { args: inner, .. } = &args[0] else { panic!() };
        assert!(matches!(&inner[0], E::Equation { var, .. } if var == "z"));
    }

    #[test]
    fn negated_scientific_lookalike() {
        // -1.4e+b is (-1.4)·e + b; `e` is an ordinary identifier, and unary
        // minus binds tighter than multiplication
        let e = expr("-1.4e+b");
        let E::Bin { op: BinOp::Add, lhs, .. } = e else { panic!() };
        assert_eq!(
            *lhs,
            E::bin(BinOp::Mul, E::Neg(Box::new(E::Number(1.4))), E::Ident("e".into()))
        );
    }

    #[test]
    fn greek_adjacency_multiplies() {
        let e = expr("2nπ");
        assert_eq!(
            e,
            E::bin(
                BinOp::Mul,
                E::bin(BinOp::Mul, E::Number(2.0), E::Ident("n".into())),
                E::Ident("π".into())
            )
        );
    }

    #[test]
    fn absolute_value_bars() {
        let e = expr("a|x - b| + c");
        let E::Bin { op: BinOp::Add, lhs, .. } = e else { panic!() };
        let E::Bin { op: BinOp::Mul, lhs: a, rhs: bars } = *lhs else { panic!() };
        assert_eq!(*a, E::Ident("a".into()));
        assert!(matches!(*bars, E::AbsBars(_)));
        let err = parse_statement(&tokenize("q=|a|b||", 1).unwrap());
        assert!(err.is_err(), "nested bars must be rejected");
    }

    #[test]
    fn implicit_mul_requires_space_between_latin_idents() {
        // `mx` is one identifier, `m x` is a product
        assert_eq!(expr("mx"), E::Ident("mx".into()));
        assert_eq!(
            expr("m x"),
            E::bin(BinOp::Mul, E::Ident("m".into()), E::Ident("x".into()))
        );
    }

    #[test]
    fn implicit_mul_never_crosses_call_commas() {
        let e = expr("f(2, 3)");
        let E::Call { args, .. } = e else { panic!() };
        assert_eq!(args, vec![E::Number(2.0), E::Number(3.0)]);
    }

    #[test]
    fn power_is_right_associative_and_binds_over_unary_minus() {
        assert_eq!(
            expr("-x^2"),
            E::Neg(Box::new(E::bin(BinOp::Pow, E::Ident("x".into()), E::Number(2.0))))
        );
        assert_eq!(
            expr("x^y^z"),
            E::bin(
                BinOp::Pow,
                E::Ident("x".into()),
                E::bin(BinOp::Pow, E::Ident("y".into()), E::Ident("z".into()))
            )
        );
    }

    #[test]
    fn unary_minus_binds_tighter_than_product() {
        assert_eq!(
            expr("-a*b"),
            E::bin(BinOp::Mul, E::Neg(Box::new(E::Ident("a".into()))), E::Ident("b".into()))
        );
    }

    #[test]
    fn script_aggregates_all_diagnostics() {
        let errs = parse_script("x=\ny=(1,\n").unwrap_err();
        assert_eq!(errs.len(), 2);
        assert_eq!(errs[0].line, 1);
        assert_eq!(errs[1].line, 2);
    }

    #[test]
    fn comment_only_script_is_empty() {
        assert_eq!(parse_script("# comment only\n").unwrap().len(), 0);
    }

    #[test]
    fn crlf_and_directives() {
        let s = parse_script("#view 3d\r\nA=(0, 0, 0)\r\n").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.lines[0].stmt, Statement::ViewDirective("3d".into()));
    }
}
