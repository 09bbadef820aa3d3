//! Canonical elements of the working function field.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use super::gcd::gcd;
use super::int::Int;
use super::poly::{Exp, Monomial, Poly};
use super::symbol::{Sym, SymbolData};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Frac {
    num: Poly,
    den: Poly,
}

/// Reduced fraction of polynomials in canonical form.
///
/// Invariants: the denominator is nonzero and has no unit content, numerator
/// and denominator are coprime, the joint integer content is one and the
/// leading coefficient of the denominator (graded lex, global symbol order)
/// is positive. Structural equality is therefore mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Expr(Arc<Frac>);

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

fn finish_content_and_sign(num: Poly, den: Poly) -> Expr {
    let k = num.content().gcd(&den.content());
    let (mut num, mut den) = if k.is_one() || k.is_zero() {
        (num, den)
    } else {
        (num.div_scalar_exact(&k), den.div_scalar_exact(&k))
    };
    let negative = den.key_lead().map(|t| t.1.is_negative()).unwrap_or(false);
    if negative {
        num = num.neg();
        den = den.neg();
    }
    Expr(Arc::new(Frac { num, den }))
}

impl Expr {
    pub fn zero() -> Expr {
        Expr(Arc::new(Frac { num: Poly::zero(), den: Poly::one() }))
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn int(v: i64) -> Expr {
        Expr::from_poly(Poly::constant(Int::from(v)))
    }

    pub fn rational(n: i64, d: i64) -> Expr {
        Expr::from_parts(Poly::constant(Int::from(n)), Poly::constant(Int::from(d)))
    }

    pub fn from_int(v: Int) -> Expr {
        Expr::from_poly(Poly::constant(v))
    }

    pub fn sym(s: Sym) -> Expr {
        Expr::from_poly(Poly::var(s))
    }

    /// `s^e` for a rational exponent.
    pub fn sym_pow(s: Sym, e: Exp) -> Expr {
        if e.is_negative() {
            Expr::from_parts(Poly::one(), Poly::monomial(Monomial::var(s, e.neg()), Int::ONE))
        } else {
            Expr::from_parts(Poly::monomial(Monomial::var(s, e), Int::ONE), Poly::one())
        }
    }

    pub fn from_poly(p: Poly) -> Expr {
        Expr::from_parts(p, Poly::one())
    }

    /// Canonical form of `num / den`. Panics if `den` is zero.
    pub fn from_parts(num: Poly, den: Poly) -> Expr {
        Expr::try_from_parts(num, den).expect("zero denominator")
    }

    pub fn try_from_parts(num: Poly, den: Poly) -> Option<Expr> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Expr::zero());
        }
        // ordinary generators with negative exponents move across the bar
        let (num, den) = {
            let mn = num.monomial_content();
            let md = den.monomial_content();
            let neg = |m: &Monomial| {
                Monomial::from_pairs(m.iter().filter(|(s, e)| e.is_negative() && !s.is_unit()).map(|(s, e)| (*s, e.neg())))
            };
            let fix = neg(&mn).mul(&neg(&md));
            if fix.is_one() {
                (num, den)
            } else {
                (num.mul_monomial(&fix), den.mul_monomial(&fix))
            }
        };
        if den.is_monomial() {
            let (dm, dc) = den.terms()[0].clone();
            let (d_ord, d_unit) = dm.split_units();
            let (n_ord, _) = num.monomial_content().split_units();
            let common = n_ord.min_with(&d_ord);
            let shift = common.mul(&d_unit).inv();
            let num = num.mul_monomial(&shift);
            let den = Poly::monomial(d_ord.div(&common), dc);
            return Some(finish_content_and_sign(num, den));
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides numerator"), den.div_exact(&g).expect("gcd divides denominator"))
        };
        let (_, du) = den.monomial_content().split_units();
        let (num, den) = if du.is_one() {
            (num, den)
        } else {
            let inv = du.inv();
            (num.mul_monomial(&inv), den.mul_monomial(&inv))
        };
        Some(finish_content_and_sign(num, den))
    }

    pub fn num(&self) -> &Poly {
        &self.0.num
    }

    pub fn den(&self) -> &Poly {
        &self.0.den
    }

    pub fn is_zero(&self) -> bool {
        self.0.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.num.is_one() && self.0.den.is_one()
    }

    /// Rational constant value, if the expression has no generators.
    pub fn as_rational(&self) -> Option<(Int, Int)> {
        let n = self.0.num.as_constant()?;
        let d = self.0.den.as_constant()?;
        Some((n, d))
    }

    pub fn is_constant(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Number of terms in numerator and denominator; a size measure.
    pub fn size(&self) -> usize {
        self.0.num.len() + self.0.den.len()
    }

    pub fn vars(&self) -> Vec<Sym> {
        let mut v = self.0.num.vars();
        v.extend(self.0.den.vars());
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn recip(&self) -> Option<Expr> {
        if self.is_zero() {
            return None;
        }
        Some(Expr::from_parts(self.0.den.clone(), self.0.num.clone()))
    }

    pub fn pow(&self, k: i64) -> Expr {
        if k == 0 {
            return Expr::one();
        }
        let base = if k < 0 { self.recip().expect("negative power of zero") } else { self.clone() };
        let k = k.unsigned_abs() as u32;
        Expr(Arc::new(Frac { num: base.0.num.pow(k), den: base.0.den.pow(k) }))
            .renormalize_sign()
    }

    fn renormalize_sign(self) -> Expr {
        let Frac { num, den } = Arc::try_unwrap(self.0).unwrap_or_else(|a| (*a).clone());
        finish_content_and_sign(num, den)
    }

    pub fn add(&self, other: &Expr) -> Expr {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b) = (&*self.0, &*other.0);
        if a.den == b.den {
            return Expr::from_parts(a.num.add(&b.num), a.den.clone());
        }
        if a.den.is_monomial() && b.den.is_monomial() {
            let (ma, ca) = &a.den.terms()[0];
            let (mb, cb) = &b.den.terms()[0];
            let lm = ma.max_with(mb);
            let lc = ca.lcm(cb);
            let fa = lm.div(ma);
            let fb = lm.div(mb);
            let num = a.num.mul_term(&fa, &lc.div_exact(ca)).add(&b.num.mul_term(&fb, &lc.div_exact(cb)));
            return Expr::from_parts(num, Poly::monomial(lm, lc));
        }
        let g = gcd(&a.den, &b.den);
        let bd = b.den.div_exact(&g).expect("gcd divides");
        let ad = a.den.div_exact(&g).expect("gcd divides");
        let num = a.num.mul(&bd).add(&b.num.mul(&ad));
        Expr::from_parts(num, a.den.mul(&bd))
    }

    pub fn neg(&self) -> Expr {
        Expr(Arc::new(Frac { num: self.0.num.neg(), den: self.0.den.clone() }))
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        if self.is_zero() || other.is_zero() {
            return Expr::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let (a, b) = (&*self.0, &*other.0);
        if a.den.is_monomial() && b.den.is_monomial() {
            return Expr::from_parts(a.num.mul(&b.num), a.den.mul(&b.den));
        }
        // cross cancellation keeps the operands of the final gcd small
        let g1 = gcd(&a.num, &b.den);
        let g2 = gcd(&b.num, &a.den);
        let an = a.num.div_exact(&g1).expect("gcd divides");
        let bd = b.den.div_exact(&g1).expect("gcd divides");
        let bn = b.num.div_exact(&g2).expect("gcd divides");
        let ad = a.den.div_exact(&g2).expect("gcd divides");
        Expr::from_parts(an.mul(&bn), ad.mul(&bd))
    }

    pub fn div(&self, other: &Expr) -> Option<Expr> {
        Some(self.mul(&other.recip()?))
    }

    pub fn scale(&self, n: i64, d: i64) -> Expr {
        self.mul(&Expr::rational(n, d))
    }

    /// Partial derivative with respect to the coordinate symbol `coord`.
    pub fn diff(&self, coord: Sym) -> Expr {
        let (a, b) = (&self.0.num, &self.0.den);
        let da = poly_diff(a, coord);
        if b.is_constant() {
            return da.mul(&Expr::from_parts(Poly::one(), b.clone()));
        }
        let db = poly_diff(b, coord);
        let a_e = Expr::from_poly(a.clone());
        let b_e = Expr::from_poly(b.clone());
        // (a' b - a b') / b^2
        let num = da.mul(&b_e).sub(&a_e.mul(&db));
        num.mul(&Expr::from_parts(Poly::one(), b.mul(b)))
    }

    /// Applies a symbol-level rewrite to every generator.
    pub fn map_symbols(&self, f: &mut impl FnMut(Sym) -> Option<Expr>) -> Expr {
        let n = map_poly(&self.0.num, f);
        let d = map_poly(&self.0.den, f);
        n.div(&d).expect("substitution made a denominator vanish")
    }

    pub fn try_map_symbols(&self, f: &mut impl FnMut(Sym) -> Option<Expr>) -> Option<Expr> {
        let n = map_poly(&self.0.num, f);
        let d = map_poly(&self.0.den, f);
        n.div(&d)
    }

    /// Numeric value; `value` supplies every non-atom generator.
    pub fn eval(&self, value: &impl Fn(Sym) -> f64) -> f64 {
        eval_poly(&self.0.num, value) / eval_poly(&self.0.den, value)
    }
}

fn map_poly(p: &Poly, f: &mut impl FnMut(Sym) -> Option<Expr>) -> Expr {
    let mut cache: rustc_hash::FxHashMap<Sym, Option<Expr>> = Default::default();
    let mut parts: Vec<Expr> = Vec::with_capacity(p.len());
    for (m, c) in p.terms() {
        let mut kept: Vec<(Sym, Exp)> = Vec::new();
        let mut factor = Expr::from_int(c.clone());
        for (s, e) in m.iter() {
            let img = cache.entry(*s).or_insert_with(|| f(*s)).clone();
            match img {
                Some(img) => {
                    assert!(e.is_integer(), "fractional power of a substituted symbol");
                    factor = factor.mul(&img.pow(e.numer()));
                }
                None => kept.push((*s, *e)),
            }
        }
        let base = Expr::from_parts(Poly::monomial(Monomial::from_pairs(kept), Int::ONE), Poly::one());
        parts.push(factor.mul(&base));
    }
    sum(parts)
}

/// Balanced summation keeps intermediate denominators small.
pub fn sum(mut parts: Vec<Expr>) -> Expr {
    if parts.is_empty() {
        return Expr::zero();
    }
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a.add(&b)),
                None => next.push(a),
            }
        }
        parts = next;
    }
    parts.pop().unwrap()
}

fn eval_poly(p: &Poly, value: &impl Fn(Sym) -> f64) -> f64 {
    let mut acc = 0.0;
    for (m, c) in p.terms() {
        let mut t = c.to_f64();
        for (s, e) in m.iter() {
            let v = match s.data() {
                SymbolData::ExpAtom { arg } => {
                    let mut q = 1.0;
                    for (cs, k) in arg {
                        q *= value(*cs).powi(*k as i32);
                    }
                    if arg.is_empty() {
                        1.0f64.exp()
                    } else {
                        q.exp()
                    }
                }
                _ => value(*s),
            };
            t *= if e.is_integer() { v.powi(e.numer() as i32) } else { v.powf(e.to_f64()) };
        }
        acc += t;
    }
    acc
}

/// Derivative of a polynomial. Fractional powers of the coordinate or of
/// an exponential atom depending on it take the slower rational route.
fn poly_diff(p: &Poly, coord: Sym) -> Expr {
    let needs_slow = p.terms().iter().any(|(m, _)| {
        m.iter().any(|(s, e)| {
            !e.is_integer()
                && (*s == coord
                    || matches!(s.data(), SymbolData::ExpAtom { arg } if arg.iter().any(|(c, _)| *c == coord)))
        })
    });
    if needs_slow {
        return poly_diff_slow(p, coord);
    }
    let mut out: Vec<(Monomial, Int)> = Vec::new();
    for (m, c) in p.terms() {
        for (s, e) in m.iter() {
            let k = Int::from(e.numer());
            if *s == coord {
                out.push((m.div(&Monomial::var(coord, Exp::ONE)), c * &k));
                continue;
            }
            match s.data() {
                SymbolData::Func { .. } => {
                    if let Some(ds) = s.func_derivative(coord) {
                        let nm = m.div(&Monomial::var(*s, Exp::ONE)).mul(&Monomial::var(ds, Exp::ONE));
                        out.push((nm, c * &k));
                    }
                }
                SymbolData::ExpAtom { arg } => {
                    // d/dx exp(m)^e = e * exp(m)^e * dm/dx
                    if let Some(&(_, deg)) = arg.iter().find(|(cs, _)| *cs == coord) {
                        let nm = m.mul(&Monomial::from_pairs(
                            arg.iter().map(|(cs, kk)| (*cs, Exp::int(*kk as i64 - i64::from(*cs == coord)))),
                        ));
                        out.push((nm, &(c * &k) * &Int::from(deg as i64)));
                    }
                }
                _ => {}
            }
        }
    }
    Expr::from_poly(Poly::from_terms(out))
}

/// Term-by-term derivative as a sum of rational expressions; handles
/// fractional exponents on coordinates and exponential atoms.
fn poly_diff_slow(p: &Poly, coord: Sym) -> Expr {
    let mut parts = Vec::new();
    for (m, c) in p.terms() {
        let term = Expr::from_parts(Poly::monomial(m.clone(), c.clone()), Poly::one());
        let mut factor = Expr::zero();
        for (s, e) in m.iter() {
            let er = Expr::rational(e.numer(), e.denom());
            if *s == coord {
                factor = factor.add(&er.mul(&Expr::sym_pow(coord, Exp::int(-1))));
                continue;
            }
            match s.data() {
                SymbolData::Func { .. } => {
                    if let Some(ds) = s.func_derivative(coord) {
                        factor = factor.add(&er.mul(&Expr::sym(ds)).mul(&Expr::sym_pow(*s, Exp::int(-1))));
                    }
                }
                SymbolData::ExpAtom { arg } => {
                    if let Some(&(_, k)) = arg.iter().find(|(cs, _)| *cs == coord) {
                        let dm = Monomial::from_pairs(arg.iter().map(|(cs, kk)| {
                            if *cs == coord {
                                (*cs, Exp::int(*kk as i64 - 1))
                            } else {
                                (*cs, Exp::int(*kk as i64))
                            }
                        }));
                        let dm = Expr::from_poly(Poly::monomial(dm, Int::from(k as i64)));
                        factor = factor.add(&er.mul(&dm));
                    }
                }
                _ => {}
            }
        }
        parts.push(term.mul(&factor));
    }
    sum(parts)
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        Expr::add(self, rhs)
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        Expr::sub(self, rhs)
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        Expr::mul(self, rhs)
    }
}

impl Div for &Expr {
    type Output = Expr;
    fn div(self, rhs: &Expr) -> Expr {
        Expr::div(self, rhs).expect("division by zero expression")
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}
