//! Deterministic textual form of [`Expr`].
//!
//! The output is accepted by the parser: integer content first, then the
//! common monomial factor, then the remaining sum in parentheses, then the
//! denominator after a single `/`.

use std::fmt;

use super::int::Int;
use super::poly::{Exp, Monomial, Poly};
use super::scalar::Expr;
use super::symbol::{Sym, SymbolData};

fn fmt_exp(e: Exp) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("({}/{})", e.numer(), e.denom())
    }
}

/// `exp(q)` where `q` is the combined argument of the unit factors.
fn fmt_units(units: &[(Sym, Exp)]) -> String {
    let mut arg = Expr::zero();
    for (s, e) in units {
        if let SymbolData::ExpAtom { arg: m } = s.data() {
            let mono = Monomial::from_pairs(m.iter().map(|(c, k)| (*c, Exp::int(*k as i64))));
            let t = Expr::from_poly(Poly::monomial(mono, Int::ONE)).scale(e.numer(), e.denom());
            arg = arg.add(&t);
        }
    }
    format!("exp({arg})")
}

fn print_rank(s: Sym) -> u8 {
    match s.data() {
        SymbolData::Const { .. } => 0,
        SymbolData::Coord { .. } => 1,
        SymbolData::Func { .. } => 2,
        SymbolData::ExpAtom { .. } => 3,
    }
}

/// Factors of a monomial, in key order. Unit atoms are merged into one `exp(..)`.
fn monomial_factors(m: &Monomial) -> Vec<String> {
    let mut pairs: Vec<(Sym, Exp)> = m.iter().copied().collect();
    // constants read best in front: p^2*x rather than x*p^2
    pairs.sort_by(|a, b| print_rank(a.0).cmp(&print_rank(b.0)).then(a.0.cmp_key(b.0)));
    let mut out = Vec::new();
    let mut units = Vec::new();
    for (s, e) in pairs {
        if s.is_unit() {
            units.push((s, e));
            continue;
        }
        let name = s.data().display_name();
        if e == Exp::ONE {
            out.push(name);
        } else {
            out.push(format!("{name}^{}", fmt_exp(e)));
        }
    }
    if !units.is_empty() {
        out.push(fmt_units(&units));
    }
    out
}

fn sorted_terms(p: &Poly) -> Vec<(Monomial, Int)> {
    let mut t: Vec<(Monomial, Int)> = p.terms().to_vec();
    t.sort_by(|a, b| b.0.grlex_key_cmp(&a.0));
    t
}

fn term_body(m: &Monomial, c: &Int) -> String {
    let mut f = monomial_factors(m);
    if !c.is_one() || f.is_empty() {
        f.insert(0, c.to_string());
    }
    f.join("*")
}

/// A sum of terms, highest graded-lex term first.
fn fmt_sum(p: &Poly) -> String {
    let mut s = String::new();
    for (i, (m, c)) in sorted_terms(p).iter().enumerate() {
        let body = term_body(m, &c.abs());
        match (i, c.is_negative()) {
            (0, false) => s.push_str(&body),
            (0, true) => {
                s.push('-');
                s.push_str(&body);
            }
            (_, false) => {
                s.push_str(" + ");
                s.push_str(&body);
            }
            (_, true) => {
                s.push_str(" - ");
                s.push_str(&body);
            }
        }
    }
    s
}

/// Splits `p` as `sign * k * m * rest` with `rest` having positive key-leading coefficient.
fn factor(p: &Poly) -> (bool, Int, Monomial, Poly) {
    let k = p.content();
    let m = p.monomial_content();
    let mut rest = p.div_scalar_exact(&k).map_monomials(|t| t.div(&m));
    let negative = rest.key_lead().map(|t| t.1.is_negative()).unwrap_or(false);
    if negative {
        rest = rest.neg();
    }
    (negative, k, m, rest)
}

/// Product of integer content, monomial and a parenthesized remainder.
fn fmt_product(k: &Int, m: &Monomial, rest: &Poly) -> (String, usize) {
    let mut f = Vec::new();
    if !k.is_one() {
        f.push(k.to_string());
    }
    f.extend(monomial_factors(m));
    if !rest.is_one() {
        if rest.len() > 1 {
            f.push(format!("({})", fmt_sum(rest)));
        } else {
            // single term with coefficient one after factoring
            let (mm, cc) = &rest.terms()[0];
            f.push(term_body(mm, cc));
        }
    }
    if f.is_empty() {
        f.push("1".into());
    }
    let n = f.len();
    (f.join("*"), n)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let (neg, k, m, rest) = factor(self.num());
        let (num, _) = fmt_product(&k, &m, &rest);
        let den = self.den();
        let sign = if neg { "-" } else { "" };
        if den.is_one() {
            return write!(f, "{sign}{num}");
        }
        let (_, dk, dm, drest) = factor(den);
        let (d, dn) = fmt_product(&dk, &dm, &drest);
        let d = if dn > 1 { format!("({d})") } else { d };
        write!(f, "{sign}{num}/{d}")
    }
}

/// Text of a sum without factoring, used where term structure is wanted.
pub fn expanded(e: &Expr) -> String {
    let num = if e.num().len() > 1 && !e.den().is_one() {
        format!("({})", fmt_sum(e.num()))
    } else if e.num().is_zero() {
        "0".into()
    } else {
        fmt_sum(e.num())
    };
    if e.den().is_one() {
        num
    } else if e.den().len() > 1 || monomial_factors(&e.den().terms()[0].0).len() + usize::from(!e.den().terms()[0].1.is_one()) > 1 {
        format!("{num}/({})", fmt_sum(e.den()))
    } else {
        format!("{num}/{}", fmt_sum(e.den()))
    }
}
