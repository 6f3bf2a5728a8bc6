//! Parsed form of construction scripts.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }

    /// (left, right) binding powers; `^` is right-associative and binds
    /// tighter than unary minus, which binds tighter than `*`/`/`.
    pub fn binding(self) -> (u8, u8) {
        match self {
            BinOp::Add | BinOp::Sub => (1, 2),
            BinOp::Mul | BinOp::Div => (3, 4),
            BinOp::Pow => (7, 6),
        }
    }
}

pub const UNARY_MINUS_BP: u8 = 5;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    Ident(String),
    Call { name: String, args: Vec<Expr> },
    Bin { op: BinOp, lhs: Box<Expr>, rhs: Box<Expr> },
    Neg(Box<Expr>),
    /// `(a, b)` or `(a, b, c)`.
    Point(Vec<Expr>),
    /// `{a, b, ...}`.
    List(Vec<Expr>),
    /// `|expr|`; bars do not nest.
    AbsBars(Box<Expr>),
    /// Inline `var = rhs` in command-argument position, e.g.
    /// `IntersectPath(z=k, M)`.
    Equation { var: String, rhs: Box<Expr> },
}

impl Expr {
    pub fn bin(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Bin { op, lhs: Box::new(lhs), rhs: Box::new(rhs) }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin { op, .. } => op.binding().0,
            Expr::Neg(_) => UNARY_MINUS_BP,
            _ => u8::MAX,
        }
    }
}

/// Pretty-printer used by diagnostics and the parse/print round-trip tests.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn paren(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
            if e.precedence() < min {
                write!(f, "(")?;
                write!(f, "{e}")?;
                write!(f, ")")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Number(v) => {
                if *v == v.trunc() && v.abs() < 1e15 {
                    write!(f, "{}", *v as i64)
                } else {
                    write!(f, "{v}")
                }
            }
            Expr::Ident(s) => write!(f, "{s}"),
            Expr::Call { name, args } => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Expr::Bin { op, lhs, rhs } => {
                let (lbp, rbp) = op.binding();
                // `^` is right-associative: a power on the left needs parens
                let left_min = if *op == BinOp::Pow { lbp + 1 } else { lbp };
                paren(f, lhs, left_min)?;
                write!(f, " {} ", op.symbol())?;
                paren(f, rhs, rbp)
            }
            Expr::Neg(e) => {
                write!(f, "-")?;
                paren(f, e, UNARY_MINUS_BP)
            }
            Expr::Point(cs) => {
                write!(f, "(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            Expr::List(es) => {
                write!(f, "{{")?;
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, "}}")
            }
            Expr::AbsBars(e) => write!(f, "|{e}|"),
            Expr::Equation { var, rhs } => write!(f, "{var} = {rhs}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Assign { name: String, expr: Expr },
    FunctionDef { name: String, params: Vec<String>, body: Expr },
    /// `label: var = rhs` where `var` is one of x, y, z.
    EquationDef { label: String, var: String, rhs: Expr },
    Bare(Expr),
    ViewDirective(String),
}

/// One statement with its source position.
#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    pub stmt: Statement,
    pub line: u32,
}

/// A parsed script; statement order is exactly the file order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Script {
    pub lines: Vec<Line>,
}

impl Script {
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}
