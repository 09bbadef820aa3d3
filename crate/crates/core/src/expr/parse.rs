//! Text to [`Expr`].
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' expo)?
//! expo   := '-'? atom ('^' expo)?
//! atom   := number | ident | ident '(' args ')' | '(' expr ')'
//! ```
//!
//! `exp(q)` needs a polynomial argument in the coordinates. `d(f, x, y)`
//! differentiates; subscripts `w_xy` and `w_34` name partial derivatives of a
//! declared function.

use super::context::Context;
use super::int::Int;
use super::poly::{Exp, Monomial, Poly};
use super::scalar::Expr;
use super::symbol::Sym;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
    #[error("undeclared identifier `{0}`")]
    Undeclared(String),
    #[error("`{func}` does not depend on `{coord}`")]
    OutsideDependencies { func: String, coord: String },
    #[error("subscript `{0}` does not name coordinates")]
    BadSubscript(String),
    #[error("exponent must be a rational number")]
    NonConstantExponent,
    #[error("exponent {0} is too large")]
    ExponentTooLarge(String),
    #[error("fractional powers are only defined for monomials in positive coordinates")]
    FractionalPower,
    #[error("exp() needs a polynomial in the coordinates with rational coefficients")]
    UnsupportedExp,
    #[error("division by zero")]
    DivisionByZero,
    #[error("`{0}` expects {1}")]
    Arity(String, &'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind} at offset {pos}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Int),
    Ident { base: String, sub: Option<String> },
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(usize, Tok)>, ParseError> {
        let mut lx = Lexer { src: src.as_bytes(), pos: 0 };
        let mut out = Vec::new();
        loop {
            while lx.pos < lx.src.len() && lx.src[lx.pos].is_ascii_whitespace() {
                lx.pos += 1;
            }
            let start = lx.pos;
            let Some(&c) = lx.src.get(lx.pos) else {
                out.push((start, Tok::End));
                return Ok(out);
            };
            if c.is_ascii_digit() {
                let s = lx.take_while(|b| b.is_ascii_digit());
                out.push((start, Tok::Num(Int::parse(s).expect("digits"))));
            } else if c.is_ascii_alphabetic() {
                let base = lx.take_while(|b| b.is_ascii_alphanumeric()).to_string();
                let mut sub = None;
                if lx.src.get(lx.pos) == Some(&b'_') {
                    lx.pos += 1;
                    let s = lx.take_while(|b| b.is_ascii_alphanumeric());
                    if s.is_empty() {
                        return Err(ParseError { pos: lx.pos, kind: ParseErrorKind::BadSubscript(String::new()) });
                    }
                    sub = Some(s.to_string());
                }
                out.push((start, Tok::Ident { base, sub }));
            } else if b"+-*/^(),".contains(&c) {
                lx.pos += 1;
                out.push((start, Tok::Op(c as char)));
            } else {
                let ch = std::str::from_utf8(&lx.src[start..]).ok().and_then(|s| s.chars().next()).unwrap_or('?');
                return Err(ParseError { pos: start, kind: ParseErrorKind::UnexpectedChar(ch) });
            }
        }
    }

    fn take_while(&mut self, f: impl Fn(u8) -> bool) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && f(self.src[self.pos]) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii")
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(n) => format!("number `{n}`"),
        Tok::Ident { base, sub: None } => format!("identifier `{base}`"),
        Tok::Ident { base, sub: Some(s) } => format!("identifier `{base}_{s}`"),
        Tok::Op(c) => format!("`{c}`"),
        Tok::End => "end of input".into(),
    }
}

const MAX_INT_POWER: i64 = 256;

struct Parser<'c> {
    ctx: &'c Context,
    toks: Vec<(usize, Tok)>,
    i: usize,
}

/// Parses `src` against the identifiers declared in `ctx`.
pub fn parse_expr(ctx: &Context, src: &str) -> Result<Expr, ParseError> {
    let toks = Lexer::tokens(src)?;
    let mut p = Parser { ctx, toks, i: 0 };
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

impl<'c> Parser<'c> {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].1
    }

    fn pos(&self) -> usize {
        self.toks[self.i].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn err<T>(&self, pos: usize, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError { pos, kind })
    }

    fn unexpected<T>(&self, expected: &'static str) -> Result<T, ParseError> {
        self.err(self.pos(), ParseErrorKind::Unexpected { expected, found: describe(self.peek()) })
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Op(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, what: &'static str) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.unexpected(what)
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.unexpected("operator or end of input")
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if *self.peek() == Tok::Op('/') {
                let pos = self.pos();
                self.bump();
                let d = self.unary()?;
                match acc.div(&d) {
                    Some(q) => acc = q,
                    None => return self.err(pos, ParseErrorKind::DivisionByZero),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let e = self.exponent()?;
        self.raise(base, &e, pos)
    }

    fn exponent(&mut self) -> Result<Expr, ParseError> {
        let neg = self.eat('-');
        let base = self.atom()?;
        let v = if *self.peek() == Tok::Op('^') {
            self.bump();
            let pos = self.pos();
            let e = self.exponent()?;
            self.raise(base, &e, pos)?
        } else {
            base
        };
        Ok(if neg { v.neg() } else { v })
    }

    fn raise(&self, base: Expr, e: &Expr, pos: usize) -> Result<Expr, ParseError> {
        let Some((n, d)) = e.as_rational() else {
            return self.err(pos, ParseErrorKind::NonConstantExponent);
        };
        let (Some(n), Some(d)) = (small(&n), small(&d)) else {
            return self.err(pos, ParseErrorKind::ExponentTooLarge(e.to_string()));
        };
        if d == 1 {
            if n.abs() > MAX_INT_POWER {
                return self.err(pos, ParseErrorKind::ExponentTooLarge(n.to_string()));
            }
            if n < 0 && base.is_zero() {
                return self.err(pos, ParseErrorKind::DivisionByZero);
            }
            return Ok(base.pow(n));
        }
        match self.fractional_power(&base, Exp::new(n, d)) {
            Some(v) => Ok(v),
            None => self.err(pos, ParseErrorKind::FractionalPower),
        }
    }

    /// `base^e` for a monomial in positive coordinates and exponential atoms.
    fn fractional_power(&self, base: &Expr, e: Exp) -> Option<Expr> {
        let num = base.num();
        let den = base.den();
        if !num.is_monomial() || !den.is_monomial() {
            return None;
        }
        let (nm, nc) = &num.terms()[0];
        let (dm, dc) = &den.terms()[0];
        if !nc.is_one() || !dc.is_one() {
            return None;
        }
        let m = nm.div(dm);
        let ok = m.iter().all(|(s, _)| s.is_unit() || self.ctx.is_positive_coord(*s));
        if !ok {
            return None;
        }
        Some(Expr::from_parts(Poly::monomial(m.pow(e), Int::ONE), Poly::one()))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (pos, tok) = self.bump();
        match tok {
            Tok::Num(n) => Ok(Expr::from_int(n)),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')', "`)`")?;
                Ok(e)
            }
            Tok::Ident { base, sub } => {
                if *self.peek() == Tok::Op('(') && sub.is_none() {
                    self.bump();
                    return self.call(&base, pos);
                }
                self.identifier(&base, sub.as_deref(), pos).map(|(e, _)| e)
            }
            other => {
                self.i -= usize::from(other != Tok::End);
                self.unexpected("a number, identifier or `(`")
            }
        }
    }

    /// Resolves a plain or subscripted identifier. The second component is the
    /// function symbol when the identifier names a declared function.
    fn identifier(&self, base: &str, sub: Option<&str>, pos: usize) -> Result<(Expr, Option<Sym>), ParseError> {
        if sub.is_none() {
            if let Some(c) = self.ctx.coord(base) {
                return Ok((Expr::sym(c.sym), None));
            }
            if let Some(c) = self.ctx.constant(base) {
                return Ok((Expr::sym(c), None));
            }
        }
        let Some(f) = self.ctx.function(base) else {
            let full = match sub {
                Some(s) => format!("{base}_{s}"),
                None => base.to_string(),
            };
            return self.err(pos, ParseErrorKind::Undeclared(full));
        };
        let mut indices = Vec::new();
        if let Some(s) = sub {
            indices = self.subscript_indices(s, pos)?;
            for i in &indices {
                if !f.deps.contains(i) {
                    let coord = self
                        .ctx
                        .coords()
                        .get(i - 1)
                        .map(|c| c.name.clone())
                        .unwrap_or_else(|| i.to_string());
                    return self.err(pos, ParseErrorKind::OutsideDependencies { func: base.to_string(), coord });
                }
            }
        }
        let sym = self
            .ctx
            .function_derivative(base, &indices)
            .expect("declared")
            .expect("indices checked");
        Ok((Expr::sym(sym), Some(sym)))
    }

    fn subscript_indices(&self, s: &str, pos: usize) -> Result<Vec<usize>, ParseError> {
        let n = self.ctx.dim();
        if s.bytes().all(|b| b.is_ascii_digit()) {
            let mut out = Vec::new();
            for b in s.bytes() {
                let i = (b - b'0') as usize;
                if i == 0 || i > n {
                    return self.err(pos, ParseErrorKind::BadSubscript(s.to_string()));
                }
                out.push(i);
            }
            return Ok(out);
        }
        // longest coordinate name first
        let mut out = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let best = self
                .ctx
                .coords()
                .iter()
                .enumerate()
                .filter(|(_, c)| rest.starts_with(c.name.as_str()))
                .max_by_key(|(_, c)| c.name.len());
            match best {
                Some((i, c)) => {
                    out.push(i + 1);
                    rest = &rest[c.name.len()..];
                }
                None => return self.err(pos, ParseErrorKind::BadSubscript(s.to_string())),
            }
        }
        Ok(out)
    }

    fn args(&mut self) -> Result<Vec<(usize, Tok, Expr)>, ParseError> {
        let mut out = Vec::new();
        if self.eat(')') {
            return Ok(out);
        }
        loop {
            let pos = self.pos();
            let tok = self.peek().clone();
            let e = self.expr()?;
            out.push((pos, tok, e));
            if self.eat(')') {
                return Ok(out);
            }
            self.expect(',', "`,` or `)`")?;
        }
    }

    fn call(&mut self, name: &str, pos: usize) -> Result<Expr, ParseError> {
        match name {
            "exp" => {
                let args = self.args()?;
                if args.len() != 1 {
                    return self.err(pos, ParseErrorKind::Arity("exp".into(), "one argument"));
                }
                match exp_of(&args[0].2) {
                    Some(e) => Ok(e),
                    None => self.err(args[0].0, ParseErrorKind::UnsupportedExp),
                }
            }
            "d" => self.derivative(pos),
            _ => {
                // `f(x, y)` written with its declared arguments
                let Some(f) = self.ctx.function(name).cloned() else {
                    return self.err(pos, ParseErrorKind::Undeclared(name.to_string()));
                };
                let args = self.args()?;
                let given: Vec<Option<Sym>> = args.iter().map(|a| single_sym(&a.2)).collect();
                let want: Vec<Option<Sym>> = f.deps.iter().map(|i| Some(self.ctx.coord_sym(*i))).collect();
                if given != want {
                    return self.err(pos, ParseErrorKind::Arity(name.to_string(), "its declared coordinates"));
                }
                Ok(Expr::sym(f.sym))
            }
        }
    }

    fn derivative(&mut self, pos: usize) -> Result<Expr, ParseError> {
        // the first argument is kept as a token when it is a lone function name
        let first_pos = self.pos();
        let lone = match (&self.toks[self.i].1, self.toks.get(self.i + 1).map(|t| &t.1)) {
            (Tok::Ident { base, sub }, Some(Tok::Op(',')) | Some(Tok::Op(')'))) => {
                Some((base.clone(), sub.clone()))
            }
            _ => None,
        };
        let args = self.args()?;
        if args.len() < 2 {
            return self.err(pos, ParseErrorKind::Arity("d".into(), "an expression and at least one coordinate"));
        }
        let mut coords = Vec::new();
        for (p, tok, _) in &args[1..] {
            match tok {
                Tok::Ident { base, sub: None } if self.ctx.coord(base).is_some() && self.toks_is_single(*p) => {
                    coords.push((base.clone(), self.ctx.coord(base).expect("checked").sym))
                }
                _ => return self.err(*p, ParseErrorKind::Unexpected { expected: "a coordinate", found: describe(tok) }),
            }
        }
        let mut value = args[0].2.clone();
        if let Some((base, sub)) = lone {
            if let (_, Some(fsym)) = self.identifier(&base, sub.as_deref(), first_pos)? {
                let mut cur = fsym;
                for (name, c) in &coords {
                    match cur.func_derivative(*c) {
                        Some(next) => cur = next,
                        None => {
                            return self
                                .err(first_pos, ParseErrorKind::OutsideDependencies { func: base.clone(), coord: name.clone() })
                        }
                    }
                }
                return Ok(Expr::sym(cur));
            }
        }
        for (_, c) in &coords {
            value = value.diff(*c);
        }
        Ok(value)
    }

    /// Whether the argument starting at token offset `pos` is a single token.
    fn toks_is_single(&self, pos: usize) -> bool {
        let k = self.toks.iter().position(|t| t.0 == pos).expect("token offset");
        matches!(self.toks.get(k + 1).map(|t| &t.1), Some(Tok::Op(',')) | Some(Tok::Op(')')))
    }
}

fn small(i: &Int) -> Option<i64> {
    match i {
        Int::Small(v) if v.abs() < (1 << 31) => Some(*v),
        _ => None,
    }
}

fn single_sym(e: &Expr) -> Option<Sym> {
    let vars = e.vars();
    if vars.len() == 1 && *e == Expr::sym(vars[0]) {
        Some(vars[0])
    } else {
        None
    }
}

/// `exp(q)` for a polynomial `q` in the coordinates with rational coefficients.
pub fn exp_of(q: &Expr) -> Option<Expr> {
    let d = q.den().as_constant()?;
    let d = small(&d)?;
    let mut m = Monomial::one();
    for (mono, c) in q.num().terms() {
        let c = small(c)?;
        let mut arg = Vec::new();
        for (s, e) in mono.iter() {
            if !s.is_coord() || !e.is_integer() || e.is_negative() {
                return None;
            }
            arg.push((*s, e.numer() as u32));
        }
        let atom = Sym::exp_atom(&arg);
        m = m.mul(&Monomial::var(atom, Exp::new(c, d)));
    }
    Some(Expr::from_parts(Poly::monomial(m, Int::ONE), Poly::one()))
}
