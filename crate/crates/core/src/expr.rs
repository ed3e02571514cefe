//! Small arithmetic expression language for model data.
//!
//! Variables are `x1..x4` and `y1..y4`; constants `pi` and `e`; operators
//! `+ - * / ^` with the usual precedence (`^` binds right); functions `exp`,
//! `ln`, `sin`, `cos`, `sqrt`. Evaluation uses forward-mode dual numbers so
//! gradients are exact.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use thiserror::Error;

/// Number of variables an expression may reference: `x1..x4`, `y1..y4`.
pub const NVARS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("unexpected character `{ch}` at offset {pos}")]
    BadChar { ch: char, pos: usize },
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("unexpected token `{0}`")]
    UnexpectedToken(String),
    #[error("unknown identifier `{0}`")]
    UnknownIdent(String),
    #[error("variable `{name}` is not allowed here (allowed: {allowed})")]
    VariableNotAllowed { name: String, allowed: String },
}

/// Value with its gradient over the `NVARS` inputs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub d: [f64; NVARS],
}

impl Dual {
    pub fn constant(v: f64) -> Self {
        Dual { v, d: [0.0; NVARS] }
    }

    pub fn variable(v: f64, slot: usize) -> Self {
        let mut d = [0.0; NVARS];
        d[slot] = 1.0;
        Dual { v, d }
    }

    fn chain(self, v: f64, dv: f64) -> Self {
        let mut d = self.d;
        for x in &mut d {
            *x *= dv;
        }
        Dual { v, d }
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e)
    }

    pub fn ln(self) -> Self {
        self.chain(self.v.ln(), 1.0 / self.v)
    }

    pub fn sin(self) -> Self {
        self.chain(self.v.sin(), self.v.cos())
    }

    pub fn cos(self) -> Self {
        self.chain(self.v.cos(), -self.v.sin())
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s)
    }

    pub fn powf(self, n: f64) -> Self {
        if n == 0.0 {
            return Dual::constant(1.0);
        }
        self.chain(self.v.powf(n), n * self.v.powf(n - 1.0))
    }

    pub fn pow(self, other: Dual) -> Self {
        if other.d.iter().all(|&x| x == 0.0) {
            return self.powf(other.v);
        }
        (other * self.ln()).exp()
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        let mut d = self.d;
        for (a, b) in d.iter_mut().zip(o.d) {
            *a += b;
        }
        Dual { v: self.v + o.v, d }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        self + (-o)
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        self.chain(-self.v, -1.0)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        let mut d = [0.0; NVARS];
        for (i, x) in d.iter_mut().enumerate() {
            *x = self.d[i] * o.v + self.v * o.d[i];
        }
        Dual { v: self.v * o.v, d }
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        let inv = 1.0 / o.v;
        let mut d = [0.0; NVARS];
        for (i, x) in d.iter_mut().enumerate() {
            *x = (self.d[i] * o.v - self.v * o.d[i]) * inv * inv;
        }
        Dual { v: self.v * inv, d }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Sqrt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Num(f64),
    Var(usize),
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// A parsed expression together with its source text.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    source: String,
    root: Node,
}

impl Expr {
    pub fn parse(text: &str) -> Result<Self, ExprError> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, pos: 0 };
        let root = p.expr()?;
        if let Some(t) = p.peek() {
            return Err(ExprError::UnexpectedToken(t.to_string()));
        }
        Ok(Expr {
            source: text.to_string(),
            root,
        })
    }

    /// Parses and rejects variables outside the first `max_vars` slots.
    pub fn parse_with_vars(text: &str, allowed: &[&str]) -> Result<Self, ExprError> {
        let e = Self::parse(text)?;
        let mut used = Vec::new();
        collect_vars(&e.root, &mut used);
        for slot in used {
            let name = var_name(slot);
            if !allowed.contains(&name.as_str()) {
                return Err(ExprError::VariableNotAllowed {
                    name,
                    allowed: allowed.join(", "),
                });
            }
        }
        Ok(e)
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn is_constant(&self) -> bool {
        let mut used = Vec::new();
        collect_vars(&self.root, &mut used);
        used.is_empty()
    }

    /// Value and gradient; `vars[0..4]` are `x1..x4`, `vars[4..8]` are `y1..y4`.
    pub fn eval_dual(&self, vars: &[f64; NVARS]) -> Dual {
        let inputs: [Dual; NVARS] = std::array::from_fn(|i| Dual::variable(vars[i], i));
        eval(&self.root, &inputs)
    }

    pub fn eval(&self, vars: &[f64; NVARS]) -> f64 {
        let inputs: [Dual; NVARS] = std::array::from_fn(|i| Dual::constant(vars[i]));
        eval(&self.root, &inputs).v
    }
}

impl FromStr for Expr {
    type Err = ExprError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expr::parse(s)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

fn var_name(slot: usize) -> String {
    if slot < 4 {
        format!("x{}", slot + 1)
    } else {
        format!("y{}", slot - 3)
    }
}

fn collect_vars(n: &Node, out: &mut Vec<usize>) {
    match n {
        Node::Num(_) => {}
        Node::Var(i) => out.push(*i),
        Node::Neg(a) | Node::Call(_, a) => collect_vars(a, out),
        Node::Bin(_, a, b) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
    }
}

fn eval(n: &Node, inputs: &[Dual; NVARS]) -> Dual {
    match n {
        Node::Num(v) => Dual::constant(*v),
        Node::Var(i) => inputs[*i],
        Node::Neg(a) => -eval(a, inputs),
        Node::Call(f, a) => {
            let x = eval(a, inputs);
            match f {
                Func::Exp => x.exp(),
                Func::Ln => x.ln(),
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Sqrt => x.sqrt(),
            }
        }
        Node::Bin(op, a, b) => {
            let (x, y) = (eval(a, inputs), eval(b, inputs));
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => x / y,
                BinOp::Pow => x.pow(y),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Num(v) => write!(f, "{v}"),
            Token::Ident(s) => f.write_str(s),
            Token::Op(c) => write!(f, "{c}"),
            Token::LParen => f.write_str("("),
            Token::RParen => f.write_str(")"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>, ExprError> {
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
            let s: String = chars[start..i].iter().collect();
            let v = s
                .parse::<f64>()
                .map_err(|_| ExprError::UnexpectedToken(s.clone()))?;
            out.push(Token::Num(v));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else if c == '(' {
            out.push(Token::LParen);
            i += 1;
        } else if c == ')' {
            out.push(Token::RParen);
            i += 1;
        } else {
            return Err(ExprError::BadChar { ch: c, pos: i });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Result<Token, ExprError> {
        let t = self.tokens.get(self.pos).cloned().ok_or(ExprError::UnexpectedEnd)?;
        self.pos += 1;
        Ok(t)
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        while let Some(Token::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(Token::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        match self.peek() {
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Some(Token::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node, ExprError> {
        let base = self.atom()?;
        if let Some(Token::Op('^')) = self.peek() {
            self.pos += 1;
            // right associative, and -x^2 style exponents are allowed
            let exp = self.unary()?;
            return Ok(Node::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, ExprError> {
        match self.next()? {
            Token::Num(v) => Ok(Node::Num(v)),
            Token::LParen => {
                let e = self.expr()?;
                match self.next()? {
                    Token::RParen => Ok(e),
                    t => Err(ExprError::UnexpectedToken(t.to_string())),
                }
            }
            Token::Ident(name) => self.ident(name),
            t => Err(ExprError::UnexpectedToken(t.to_string())),
        }
    }

    fn ident(&mut self, name: String) -> Result<Node, ExprError> {
        let func = match name.as_str() {
            "exp" => Some(Func::Exp),
            "ln" | "log" => Some(Func::Ln),
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "sqrt" => Some(Func::Sqrt),
            _ => None,
        };
        if let Some(f) = func {
            match self.next()? {
                Token::LParen => {}
                t => return Err(ExprError::UnexpectedToken(t.to_string())),
            }
            let arg = self.expr()?;
            match self.next()? {
                Token::RParen => {}
                t => return Err(ExprError::UnexpectedToken(t.to_string())),
            }
            return Ok(Node::Call(f, Box::new(arg)));
        }
        match name.as_str() {
            "pi" => return Ok(Node::Num(std::f64::consts::PI)),
            "e" => return Ok(Node::Num(std::f64::consts::E)),
            _ => {}
        }
        let slot = match name.as_bytes() {
            [b'x', d @ b'1'..=b'4'] => (d - b'1') as usize,
            [b'y', d @ b'1'..=b'4'] => 4 + (d - b'1') as usize,
            _ => return Err(ExprError::UnknownIdent(name)),
        };
        Ok(Node::Var(slot))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(x: [f64; 4]) -> [f64; NVARS] {
        [x[0], x[1], x[2], x[3], 0.0, 0.0, 0.0, 0.0]
    }

    #[test]
    fn precedence() {
        let e = Expr::parse("1 + 2 * 3 ^ 2").unwrap();
        assert_eq!(e.eval(&[0.0; NVARS]), 19.0);
        let e = Expr::parse("2 ^ 3 ^ 2").unwrap();
        assert_eq!(e.eval(&[0.0; NVARS]), 512.0);
        let e = Expr::parse("-2 ^ 2").unwrap();
        assert_eq!(e.eval(&[0.0; NVARS]), -4.0);
        let e = Expr::parse("(1 - 3) / 4").unwrap();
        assert_eq!(e.eval(&[0.0; NVARS]), -0.5);
    }

    #[test]
    fn scientific_literals_and_constants() {
        let e = Expr::parse("1.5e-1 + 2E2 + pi - pi + e - e").unwrap();
        assert!((e.eval(&[0.0; NVARS]) - 200.15).abs() < 1e-12);
    }

    #[test]
    fn gradient_of_gaussian_bump() {
        let e = Expr::parse("1 + exp(-(x1^2 + x2^2 + x3^2)) + 0.1*x4").unwrap();
        let x = [0.3, -0.2, 0.1, 0.5];
        let d = e.eval_dual(&at(x));
        let g = (-(0.09f64 + 0.04 + 0.01)).exp();
        assert!((d.v - (1.0 + g + 0.05)).abs() < 1e-15);
        assert!((d.d[0] + 2.0 * 0.3 * g).abs() < 1e-15);
        assert!((d.d[1] - 2.0 * 0.2 * g).abs() < 1e-15);
        assert!((d.d[3] - 0.1).abs() < 1e-15);
        assert_eq!(d.d[4], 0.0);
    }

    #[test]
    fn gradient_matches_central_differences() {
        let e = Expr::parse("sin(x1*y2) + sqrt(1 + x2^2) * ln(2 + cos(y1)) / (3 + x3) + x4^y3").unwrap();
        let v = [0.3, 0.7, -0.4, 1.3, 0.2, -0.6, 1.1, 0.0];
        let d = e.eval_dual(&v);
        for i in 0..NVARS {
            let h = 1e-6;
            let mut a = v;
            let mut b = v;
            a[i] += h;
            b[i] -= h;
            let fd = (e.eval(&a) - e.eval(&b)) / (2.0 * h);
            assert!((fd - d.d[i]).abs() < 1e-8, "slot {i}: {fd} vs {}", d.d[i]);
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(Expr::parse("x5"), Err(ExprError::UnknownIdent(_))));
        assert!(matches!(Expr::parse("1 +"), Err(ExprError::UnexpectedEnd)));
        assert!(matches!(Expr::parse("1 $ 2"), Err(ExprError::BadChar { .. })));
        assert!(matches!(Expr::parse("(1"), Err(ExprError::UnexpectedEnd)));
        assert!(matches!(Expr::parse("1 2"), Err(ExprError::UnexpectedToken(_))));
        assert!(matches!(
            Expr::parse_with_vars("x1 + y1", &["x1", "x2", "x3", "x4"]),
            Err(ExprError::VariableNotAllowed { .. })
        ));
    }

    #[test]
    fn constant_detection() {
        assert!(Expr::parse("2*pi").unwrap().is_constant());
        assert!(!Expr::parse("x1").unwrap().is_constant());
    }
}
