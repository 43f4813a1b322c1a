//! Single-variable real arithmetic expressions.
//!
//! Grammar, lowest to highest precedence:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | atom
//! atom  := number | var | func '(' expr (',' expr)* ')' | '(' expr ')'
//! func  := abs | sqrt | min | max | pow
//! ```
//!
//! Maps are written in `x`, control functions in `t`. The [`Display`] impl is
//! the canonical printer: it fully parenthesizes binary operations, and its
//! output parses back to an equivalent tree.
//!
//! [`Display`]: std::fmt::Display

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Abs,
    Sqrt,
    Min,
    Max,
    Pow,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "abs" => Func::Abs,
            "sqrt" => Func::Sqrt,
            "min" => Func::Min,
            "max" => Func::Max,
            "pow" => Func::Pow,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
            Func::Min => "min",
            Func::Max => "max",
            Func::Pow => "pow",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Abs | Func::Sqrt => 1,
            Func::Min | Func::Max | Func::Pow => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var,
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

/// A parsed expression in one variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    var: String,
    root: Node,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier {name:?} at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("{func} takes {expected} argument(s), got {got} (offset {offset})")]
    Arity { offset: usize, func: &'static str, expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalErrorKind {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative number")]
    NegativeSqrt,
    /// Non-integer exponent on a negative base.
    #[error("non-integer power of a negative number")]
    NegativePowBase,
    #[error("non-finite result")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} in `{node}`")]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub node: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent only when a digit follows `e`, `e+` or `e-`
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let lit: String = chars[start..i].iter().collect();
            let v = lit
                .parse::<f64>()
                .map_err(|_| ParseError::Syntax { offset: start, message: format!("malformed number {lit:?}") })?;
            out.push((start, Tok::Num(v)));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/(),".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ParseError::Syntax { offset: i, message: format!("unexpected character {c:?}") });
        }
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    var: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let found = match self.peek() {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Op(c) => format!("{c:?}"),
            Tok::End => "end of input".to_string(),
        };
        ParseError::Syntax { offset: self.offset(), message: format!("expected {wanted}, found {found}") }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Op(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("{c:?}")))
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Node::Num(v))
            }
            Tok::Op('(') => {
                self.bump();
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.bump();
                if name == self.var {
                    return Ok(Node::Var);
                }
                let func =
                    Func::from_name(&name).ok_or(ParseError::UnknownIdentifier { offset, name: name.clone() })?;
                self.expect('(')?;
                let mut args = vec![self.expr()?];
                while *self.peek() == Tok::Op(',') {
                    self.bump();
                    args.push(self.expr()?);
                }
                self.expect(')')?;
                if args.len() != func.arity() {
                    return Err(ParseError::Arity {
                        offset,
                        func: func.name(),
                        expected: func.arity(),
                        got: args.len(),
                    });
                }
                Ok(Node::Call(func, args))
            }
            _ => Err(self.unexpected("a number, variable, function or '('")),
        }
    }
}

impl Expr {
    /// Parses `text` as an expression in the variable `var`.
    pub fn parse(text: &str, var: &str) -> Result<Self, ParseError> {
        let mut p = Parser { toks: lex(text)?, pos: 0, var };
        let root = p.expr()?;
        if *p.peek() != Tok::End {
            return Err(p.unexpected("an operator or end of input"));
        }
        Ok(Self { var: var.to_string(), root })
    }

    /// Parses a map expression in `x`.
    pub fn map(text: &str) -> Result<Self, ParseError> {
        Self::parse(text, "x")
    }

    /// Parses a control-function expression in `t`.
    pub fn control(text: &str) -> Result<Self, ParseError> {
        Self::parse(text, "t")
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn eval(&self, value: f64) -> Result<f64, EvalError> {
        self.eval_node(&self.root, value)
    }

    fn fail(&self, kind: EvalErrorKind, node: &Node) -> EvalError {
        let mut s = String::new();
        write_node(&mut s, node, &self.var).expect("writing to a String");
        EvalError { kind, node: s }
    }

    fn eval_node(&self, node: &Node, x: f64) -> Result<f64, EvalError> {
        let v = match node {
            Node::Num(v) => *v,
            Node::Var => x,
            Node::Neg(a) => -self.eval_node(a, x)?,
            Node::Bin(op, a, b) => {
                let (a, b) = (self.eval_node(a, x)?, self.eval_node(b, x)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div if b == 0.0 => return Err(self.fail(EvalErrorKind::DivisionByZero, node)),
                    BinOp::Div => a / b,
                }
            }
            Node::Call(f, args) => {
                let a = self.eval_node(&args[0], x)?;
                match f {
                    Func::Abs => a.abs(),
                    Func::Sqrt if a < 0.0 => return Err(self.fail(EvalErrorKind::NegativeSqrt, node)),
                    Func::Sqrt => a.sqrt(),
                    Func::Min => a.min(self.eval_node(&args[1], x)?),
                    Func::Max => a.max(self.eval_node(&args[1], x)?),
                    Func::Pow => {
                        let e = self.eval_node(&args[1], x)?;
                        if a < 0.0 && e.fract() != 0.0 {
                            return Err(self.fail(EvalErrorKind::NegativePowBase, node));
                        }
                        if a == 0.0 && e < 0.0 {
                            return Err(self.fail(EvalErrorKind::DivisionByZero, node));
                        }
                        a.powf(e)
                    }
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.fail(EvalErrorKind::NonFinite, node))
        }
    }
}

fn write_node(f: &mut impl fmt::Write, node: &Node, var: &str) -> fmt::Result {
    match node {
        Node::Num(v) => write!(f, "{v}"),
        Node::Var => f.write_str(var),
        Node::Neg(a) => {
            f.write_str("-(")?;
            write_node(f, a, var)?;
            f.write_str(")")
        }
        Node::Bin(op, a, b) => {
            let sym = match op {
                BinOp::Add => " + ",
                BinOp::Sub => " - ",
                BinOp::Mul => " * ",
                BinOp::Div => " / ",
            };
            f.write_str("(")?;
            write_node(f, a, var)?;
            f.write_str(sym)?;
            write_node(f, b, var)?;
            f.write_str(")")
        }
        Node::Call(func, args) => {
            write!(f, "{}(", func.name())?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write_node(f, a, var)?;
            }
            f.write_str(")")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, &self.root, &self.var)
    }
}
