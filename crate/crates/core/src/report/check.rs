//! A small grammar for tensor identities such as `P.P + 1/3*Q(S,P) == 0`.
//!
//! ```text
//! identity := sum '==' sum
//! sum      := product (('+' | '-') product)*
//! product  := unary (('*' | '/') unary)*
//! unary    := '-' unary | dotted
//! dotted   := atom ('.' atom)*
//! atom     := integer | '{' scalar '}' | name | call | '(' sum ')'
//! call     := ('Q' | 'wedge') '(' sum ',' sum ')' | ('nabla' | 'div') '(' sum ')'
//! ```
//!
//! Names are `R S C W K P G g Grot T` and the scalar `kappa`; `{...}` holds
//! a scalar expression in the metric's symbols. `A.B` is the derivation
//! action of `A` on `B`, `Q(A,B)` the Tachibana tensor, `wedge` the
//! Kulkarni–Nomizu product and `div` contracts the derivative slot with the
//! first slot.

use crate::classify::{ClassifyError, Workspace};
use crate::curvature::{self, CurvatureError};
use crate::expr::{parse_expr, Expr, ParseError};
use crate::geometry::{ShapeError, Tensor};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Number(i64),
    Scalar(String),
    Name(String),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Dot(Box<Node>, Box<Node>),
    Q(Box<Node>, Box<Node>),
    Wedge(Box<Node>, Box<Node>),
    Nabla(Box<Node>),
    Divergence(Box<Node>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub lhs: Node,
    pub rhs: Node,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CheckError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("bad scalar `{0}`: {1}")]
    Scalar(String, ParseError),
    #[error("{0}")]
    Type(String),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Brace(String),
    Sym(char),
    Eq,
    End,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, CheckError> {
    let b: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, msg: &str| CheckError::Syntax { pos, msg: msg.into() };
    while i < b.len() {
        let c = b[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = b[start..i].iter().collect();
            out.push((start, Tok::Int(s.parse().map_err(|_| err(start, "integer too large"))?)));
        } else if c.is_alphabetic() || c == '_' {
            while i < b.len() && (b[i].is_alphanumeric() || b[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(b[start..i].iter().collect())));
        } else if c == '{' {
            let close = b[i..].iter().position(|&d| d == '}').ok_or_else(|| err(start, "unclosed `{`"))?;
            out.push((start, Tok::Brace(b[i + 1..i + close].iter().collect())));
            i += close + 1;
        } else if c == '=' {
            if b.get(i + 1) != Some(&'=') {
                return Err(err(start, "expected `==`"));
            }
            out.push((start, Tok::Eq));
            i += 2;
        } else if "+-*/.(),".contains(c) {
            out.push((start, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(err(start, &format!("unexpected `{c}`")));
        }
    }
    out.push((b.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].1
    }

    fn pos(&self) -> usize {
        self.toks[self.i].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].1.clone();
        if t != Tok::End {
            self.i += 1;
        }
        t
    }

    fn fail<T>(&self, msg: &str) -> Result<T, CheckError> {
        Err(CheckError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, c: char) -> Result<(), CheckError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.fail(&format!("expected `{c}`"))
        }
    }

    fn sum(&mut self) -> Result<Node, CheckError> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Node, CheckError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Sym('/') => {
                    self.bump();
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node, CheckError> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        let mut lhs = self.atom()?;
        while *self.peek() == Tok::Sym('.') {
            self.bump();
            lhs = Node::Dot(Box::new(lhs), Box::new(self.atom()?));
        }
        Ok(lhs)
    }

    fn args(&mut self, n: usize) -> Result<Vec<Node>, CheckError> {
        self.expect('(')?;
        let mut out = vec![self.sum()?];
        while out.len() < n {
            self.expect(',')?;
            out.push(self.sum()?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn atom(&mut self) -> Result<Node, CheckError> {
        match self.bump() {
            Tok::Int(k) => Ok(Node::Number(k)),
            Tok::Brace(s) => Ok(Node::Scalar(s)),
            Tok::Sym('(') => {
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let two = |v: Vec<Node>| {
                    let mut it = v.into_iter();
                    (Box::new(it.next().unwrap()), Box::new(it.next().unwrap()))
                };
                match name.as_str() {
                    "Q" if *self.peek() == Tok::Sym('(') => {
                        let (a, b) = two(self.args(2)?);
                        Ok(Node::Q(a, b))
                    }
                    "wedge" => {
                        let (a, b) = two(self.args(2)?);
                        Ok(Node::Wedge(a, b))
                    }
                    "nabla" => Ok(Node::Nabla(Box::new(self.args(1)?.remove(0)))),
                    "div" => Ok(Node::Divergence(Box::new(self.args(1)?.remove(0)))),
                    _ => Ok(Node::Name(name)),
                }
            }
            _ => {
                self.i = self.i.saturating_sub(1);
                self.fail("expected a tensor, a number or `(`")
            }
        }
    }
}

pub fn parse_identity(src: &str) -> Result<Identity, CheckError> {
    let mut p = Parser { toks: lex(src)?, i: 0 };
    let lhs = p.sum()?;
    if *p.peek() != Tok::Eq {
        return p.fail("expected `==`");
    }
    p.bump();
    let rhs = p.sum()?;
    if *p.peek() != Tok::End {
        return p.fail("trailing input");
    }
    Ok(Identity { lhs, rhs })
}

enum Value {
    Scalar(Expr),
    Tensor(Tensor),
}

fn eval(ws: &Workspace, n: &Node) -> Result<Value, CheckError> {
    let m = ws.metric();
    let tensor = |n: &Node| -> Result<Tensor, CheckError> {
        match eval(ws, n)? {
            Value::Tensor(t) => Ok(t),
            Value::Scalar(_) => Err(CheckError::Type("expected a tensor, found a scalar".into())),
        }
    };
    Ok(match n {
        Node::Number(k) => Value::Scalar(Expr::int(*k)),
        Node::Scalar(s) => Value::Scalar(m.reduce(parse_expr(m.chart().context(), s).map_err(|e| CheckError::Scalar(s.clone(), e))?)),
        Node::Name(name) => match name.as_str() {
            "kappa" => Value::Scalar(m.scalar().clone()),
            "R" | "S" | "C" | "W" | "K" | "P" | "G" | "g" | "Grot" | "T" => Value::Tensor((*ws.tensor(name)?).clone()),
            _ => return Err(CheckError::UnknownName(name.clone())),
        },
        Node::Neg(a) => match eval(ws, a)? {
            Value::Scalar(e) => Value::Scalar(e.neg()),
            Value::Tensor(t) => Value::Tensor(t.neg()),
        },
        Node::Add(a, b) | Node::Sub(a, b) => {
            let sub = matches!(n, Node::Sub(..));
            match (eval(ws, a)?, eval(ws, b)?) {
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(if sub { x.sub(&y) } else { x.add(&y) }),
                (Value::Tensor(x), Value::Tensor(y)) => Value::Tensor(if sub { x.sub(&y)? } else { x.add(&y)? }),
                (Value::Tensor(x), Value::Scalar(y)) if y.is_zero() => Value::Tensor(x),
                (Value::Scalar(x), Value::Tensor(y)) if x.is_zero() => Value::Tensor(if sub { y.neg() } else { y }),
                _ => return Err(CheckError::Type("cannot add a tensor and a nonzero scalar".into())),
            }
        }
        Node::Mul(a, b) => match (eval(ws, a)?, eval(ws, b)?) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x.mul(&y)),
            (Value::Scalar(k), Value::Tensor(t)) | (Value::Tensor(t), Value::Scalar(k)) => Value::Tensor(t.scale(&k)),
            _ => return Err(CheckError::Type("`*` needs a scalar factor; use `.`, Q or wedge for tensors".into())),
        },
        Node::Div(a, b) => {
            let Value::Scalar(d) = eval(ws, b)? else {
                return Err(CheckError::Type("division by a tensor".into()));
            };
            let inv = d.recip().ok_or_else(|| CheckError::Type("division by zero".into()))?;
            match eval(ws, a)? {
                Value::Scalar(x) => Value::Scalar(x.mul(&inv)),
                Value::Tensor(t) => Value::Tensor(t.scale(&inv)),
            }
        }
        Node::Dot(a, b) => Value::Tensor(curvature::dot_action(m, &tensor(a)?, &tensor(b)?)?),
        Node::Q(a, b) => Value::Tensor(curvature::q_operator(m, &tensor(a)?, &tensor(b)?)?),
        Node::Wedge(a, b) => Value::Tensor(curvature::kulkarni_nomizu(&tensor(a)?, &tensor(b)?)?),
        Node::Nabla(a) => Value::Tensor(m.covariant_derivative(&tensor(a)?)),
        Node::Divergence(a) => Value::Tensor(curvature::divergence(m, &tensor(a)?, 1)?),
    })
}

/// Result of an identity check: the first nonzero entry of `lhs - rhs`, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub holds: bool,
    pub residual: Option<(Vec<usize>, Expr)>,
}

pub fn check_identity(ws: &Workspace, id: &Identity) -> Result<CheckOutcome, CheckError> {
    let m = ws.metric();
    let diff = eval(ws, &Node::Sub(Box::new(id.lhs.clone()), Box::new(id.rhs.clone())))?;
    let residual = match diff {
        Value::Scalar(e) => Some((vec![], m.reduce(e))).filter(|(_, e)| !e.is_zero()),
        Value::Tensor(t) => m.reduce_tensor(&t).first_nonzero(),
    };
    Ok(CheckOutcome { holds: residual.is_none(), residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;

    fn check(metric: &str, src: &str) -> CheckOutcome {
        let m = builtin(metric).unwrap().metric().unwrap();
        let ws = Workspace::new(&m);
        check_identity(&ws, &parse_identity(src).unwrap()).unwrap()
    }

    #[test]
    fn parses_scalar_multiples_and_calls() {
        let id = parse_identity("P.P + 1/3*Q(S,P) == 0").unwrap();
        let Node::Add(_, rhs) = id.lhs else { panic!("sum expected") };
        assert!(matches!(*rhs, Node::Mul(ref k, ref q) if matches!(**k, Node::Div(..)) && matches!(**q, Node::Q(..))));
        assert_eq!(id.rhs, Node::Number(0));
    }

    #[test]
    fn syntax_errors_report_a_position() {
        assert!(matches!(parse_identity("R.R = 0"), Err(CheckError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_identity("Q(S,R == 0"), Err(CheckError::Syntax { .. })));
    }

    #[test]
    fn prm_identities() {
        assert!(check("prm", "R.R == 0").holds);
        assert!(check("prm", "P.P + 1/3*Q(S,P) == 0").holds);
        assert!(!check("prm", "P.P == 0").holds);
        let div = check("prm", "div(R) == 0");
        assert!(!div.holds && div.residual.is_some());
        assert!(check("prm", "kappa == 0").holds);
        assert!(check("prm", "W == R").holds);
    }

    #[test]
    fn unknown_names_and_type_errors() {
        let m = builtin("ppw").unwrap().metric().unwrap();
        let ws = Workspace::new(&m);
        let e = check_identity(&ws, &parse_identity("X == 0").unwrap()).unwrap_err();
        assert_eq!(e, CheckError::UnknownName("X".into()));
        let e = check_identity(&ws, &parse_identity("R*S == 0").unwrap()).unwrap_err();
        assert!(matches!(e, CheckError::Type(_)));
    }
}
