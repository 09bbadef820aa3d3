//! Sparse multivariate polynomials with integer coefficients.
//!
//! Exponents are small rationals: ordinary generators carry non-negative
//! exponents (fractional only for declared-positive coordinates), while
//! exponential atoms are units and may carry any rational exponent.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::int::Int;
use super::symbol::Sym;

/// Reduced rational exponent with positive denominator.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Exp {
    n: i64,
    d: i64,
}

impl fmt::Debug for Exp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 1 {
            write!(f, "{}", self.n)
        } else {
            write!(f, "{}/{}", self.n, self.d)
        }
    }
}

impl Exp {
    pub const ZERO: Exp = Exp { n: 0, d: 1 };
    pub const ONE: Exp = Exp { n: 1, d: 1 };

    pub const fn int(n: i64) -> Exp {
        Exp { n, d: 1 }
    }

    pub fn new(n: i64, d: i64) -> Exp {
        assert!(d != 0, "zero exponent denominator");
        let g = n.gcd(&d);
        let s = if d < 0 { -1 } else { 1 };
        Exp { n: s * n / g, d: s * d / g }
    }

    pub fn numer(self) -> i64 {
        self.n
    }

    pub fn denom(self) -> i64 {
        self.d
    }

    pub fn is_zero(self) -> bool {
        self.n == 0
    }

    pub fn is_integer(self) -> bool {
        self.d == 1
    }

    pub fn is_negative(self) -> bool {
        self.n < 0
    }

    pub fn add(self, o: Exp) -> Exp {
        if self.d == 1 && o.d == 1 {
            Exp::int(self.n + o.n)
        } else {
            Exp::new(self.n * o.d + o.n * self.d, self.d * o.d)
        }
    }

    pub fn sub(self, o: Exp) -> Exp {
        self.add(o.neg())
    }

    pub fn neg(self) -> Exp {
        Exp { n: -self.n, d: self.d }
    }

    pub fn mul(self, o: Exp) -> Exp {
        Exp::new(self.n * o.n, self.d * o.d)
    }

    pub fn min(self, o: Exp) -> Exp {
        if self <= o {
            self
        } else {
            o
        }
    }

    pub fn max(self, o: Exp) -> Exp {
        if self >= o {
            self
        } else {
            o
        }
    }

    pub fn floor(self) -> i64 {
        self.n.div_euclid(self.d)
    }

    pub fn to_f64(self) -> f64 {
        self.n as f64 / self.d as f64
    }
}

impl PartialOrd for Exp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exp {
    fn cmp(&self, other: &Self) -> Ordering {
        ((self.n as i128) * (other.d as i128)).cmp(&((other.n as i128) * (self.d as i128)))
    }
}

/// Power product of generators, sorted by symbol handle, zero exponents omitted.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial(SmallVec<[(Sym, Exp); 4]>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(SmallVec::new())
    }

    pub fn var(s: Sym, e: Exp) -> Monomial {
        let mut m = Monomial::one();
        if !e.is_zero() {
            m.0.push((s, e));
        }
        m
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Sym, Exp)>) -> Monomial {
        let mut v: SmallVec<[(Sym, Exp); 4]> = SmallVec::new();
        for (s, e) in pairs {
            v.push((s, e));
        }
        v.sort_by_key(|p| p.0);
        let mut out: SmallVec<[(Sym, Exp); 4]> = SmallVec::new();
        for (s, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == s => last.1 = last.1.add(e),
                _ => out.push((s, e)),
            }
        }
        out.retain(|p| !p.1.is_zero());
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Sym, Exp)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exp_of(&self, s: Sym) -> Exp {
        match self.0.binary_search_by_key(&s, |p| p.0) {
            Ok(i) => self.0[i].1,
            Err(_) => Exp::ZERO,
        }
    }

    fn combine(&self, other: &Monomial, f: impl Fn(Exp, Exp) -> Exp) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out: SmallVec<[(Sym, Exp); 4]> = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let (s, e) = if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                i += 1;
                (a[i - 1].0, f(a[i - 1].1, Exp::ZERO))
            } else if i >= a.len() || b[j].0 < a[i].0 {
                j += 1;
                (b[j - 1].0, f(Exp::ZERO, b[j - 1].1))
            } else {
                i += 1;
                j += 1;
                (a[i - 1].0, f(a[i - 1].1, b[j - 1].1))
            };
            if !e.is_zero() {
                out.push((s, e));
            }
        }
        Monomial(out)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        self.combine(other, Exp::add)
    }

    /// Quotient with possibly negative exponents.
    pub fn div(&self, other: &Monomial) -> Monomial {
        self.combine(other, Exp::sub)
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|(s, e)| (*s, e.neg())).collect())
    }

    pub fn pow(&self, k: Exp) -> Monomial {
        Monomial(self.0.iter().map(|(s, e)| (*s, e.mul(k))).filter(|p| !p.1.is_zero()).collect())
    }

    /// Per-generator minimum, treating absent generators as exponent zero.
    pub fn min_with(&self, other: &Monomial) -> Monomial {
        self.combine(other, Exp::min)
    }

    pub fn max_with(&self, other: &Monomial) -> Monomial {
        self.combine(other, Exp::max)
    }

    pub fn has_negative(&self) -> bool {
        self.0.iter().any(|p| p.1.is_negative())
    }

    /// Splits into (ordinary part, unit part).
    pub fn split_units(&self) -> (Monomial, Monomial) {
        let mut ord = SmallVec::new();
        let mut unit = SmallVec::new();
        for p in &self.0 {
            if p.0.is_unit() {
                unit.push(*p);
            } else {
                ord.push(*p);
            }
        }
        (Monomial(ord), Monomial(unit))
    }

    pub fn without(&self, s: Sym) -> Monomial {
        Monomial(self.0.iter().copied().filter(|p| p.0 != s).collect())
    }

    pub fn total_degree(&self) -> Exp {
        self.0.iter().fold(Exp::ZERO, |acc, p| acc.add(p.1))
    }

    /// Lexicographic order with lower symbol handles more significant.
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(x), None) => return x.1.cmp(&Exp::ZERO),
                (None, Some(y)) => return Exp::ZERO.cmp(&y.1),
                (Some(x), Some(y)) => {
                    if x.0 < y.0 {
                        return x.1.cmp(&Exp::ZERO);
                    } else if y.0 < x.0 {
                        return Exp::ZERO.cmp(&y.1);
                    } else {
                        let c = x.1.cmp(&y.1);
                        if c != Ordering::Equal {
                            return c;
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }

    /// Graded lexicographic order using the global symbol key order.
    pub fn grlex_key_cmp(&self, other: &Monomial) -> Ordering {
        let c = self.total_degree().cmp(&other.total_degree());
        if c != Ordering::Equal {
            return c;
        }
        let mut a: Vec<(Sym, Exp)> = self.0.to_vec();
        let mut b: Vec<(Sym, Exp)> = other.0.to_vec();
        a.sort_by(|x, y| x.0.cmp_key(y.0));
        b.sort_by(|x, y| x.0.cmp_key(y.0));
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(x), None) => return x.1.cmp(&Exp::ZERO),
                (None, Some(y)) => return Exp::ZERO.cmp(&y.1),
                (Some(x), Some(y)) => match x.0.cmp_key(y.0) {
                    Ordering::Less => return x.1.cmp(&Exp::ZERO),
                    Ordering::Greater => return Exp::ZERO.cmp(&y.1),
                    Ordering::Equal => {
                        let c = x.1.cmp(&y.1);
                        if c != Ordering::Equal {
                            return c;
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

pub type Term = (Monomial, Int);

/// Polynomial stored as terms sorted by descending [`Monomial::lex_cmp`].
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Poly {
    terms: Vec<Term>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Int::ONE)
    }

    pub fn constant(c: Int) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Monomial::one(), c)] }
        }
    }

    pub fn monomial(m: Monomial, c: Int) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn var(s: Sym) -> Poly {
        Poly::monomial(Monomial::var(s, Exp::ONE), Int::ONE)
    }

    /// Builds a polynomial from unsorted terms, merging duplicates.
    pub fn from_terms(terms: Vec<Term>) -> Poly {
        let mut map: FxHashMap<Monomial, Int> = FxHashMap::default();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            match map.get_mut(&m) {
                Some(v) => *v = &*v + &c,
                None => {
                    map.insert(m, c);
                }
            }
        }
        let mut terms: Vec<Term> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.lex_cmp(&a.0));
        Poly { terms }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn as_constant(&self) -> Option<Int> {
        match self.terms.as_slice() {
            [] => Some(Int::ZERO),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &Int) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        if k.is_one() {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn div_scalar_exact(&self, k: &Int) -> Poly {
        if k.is_one() {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.div_exact(k))).collect() }
    }

    /// Multiplication by a monomial preserves the term order.
    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        if m.is_one() {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, k: &Int) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(t, c)| (t.mul(m), c * k)).collect() }
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.lex_cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Poly { terms: out }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        if other.is_zero() {
            return self.clone();
        }
        self.merge(other, true)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_term(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_term(m, c);
        }
        let mut map: FxHashMap<Monomial, Int> =
            FxHashMap::with_capacity_and_hasher(self.terms.len() * other.terms.len(), Default::default());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match map.get_mut(&m) {
                    Some(v) => *v = &*v + &c,
                    None => {
                        map.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<Term> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.lex_cmp(&a.0));
        Poly { terms }
    }

    pub fn pow(&self, k: u32) -> Poly {
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return Poly::monomial(m.pow(Exp::int(k as i64)), c.pow(k));
        }
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Gcd of the integer coefficients (non-negative).
    pub fn content(&self) -> Int {
        let mut g = Int::ZERO;
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Per-generator minimum exponent over all terms (absent counts as zero).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::one();
        };
        let mut acc = first.clone();
        // no early exit: units may carry negative exponents in later terms
        for (m, _) in it {
            acc = acc.min_with(m);
        }
        acc
    }

    /// Generators occurring in the polynomial, sorted by handle.
    pub fn vars(&self) -> Vec<Sym> {
        let mut v: Vec<Sym> = self.terms.iter().flat_map(|(m, _)| m.iter().map(|p| p.0)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn contains_var(&self, s: Sym) -> bool {
        self.terms.iter().any(|(m, _)| !m.exp_of(s).is_zero())
    }

    pub fn max_exp(&self, s: Sym) -> Exp {
        self.terms.iter().map(|(m, _)| m.exp_of(s)).max().unwrap_or(Exp::ZERO)
    }

    /// Coefficients with respect to `s`, keyed by exponent, `s` removed.
    pub fn coeffs_in(&self, s: Sym) -> Vec<(Exp, Poly)> {
        let mut groups: Vec<(Exp, Vec<Term>)> = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exp_of(s);
            let rest = m.without(s);
            match groups.iter_mut().find(|g| g.0 == e) {
                Some(g) => g.1.push((rest, c.clone())),
                None => groups.push((e, vec![(rest, c.clone())])),
            }
        }
        let mut out: Vec<(Exp, Poly)> = groups
            .into_iter()
            .map(|(e, ts)| {
                let mut ts = ts;
                ts.sort_by(|a, b| b.0.lex_cmp(&a.0));
                (e, Poly { terms: ts })
            })
            .collect();
        out.sort_by(|a, b| b.0.cmp(&a.0));
        out
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if divisor.terms.len() == 1 {
            let (dm, dc) = &divisor.terms[0];
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                let q = m.div(dm);
                if q.iter().any(|p| p.1.is_negative() && !p.0.is_unit()) {
                    return None;
                }
                if !c.rem(dc).is_zero() {
                    return None;
                }
                terms.push((q, c.div_exact(dc)));
            }
            return Some(Poly { terms });
        }
        let (lm, lc) = divisor.terms[0].clone();
        let mut rem = self.clone();
        let mut quot: Vec<Term> = Vec::new();
        while let Some((rm, rc)) = rem.terms.first().cloned() {
            let qm = rm.div(&lm);
            if qm.iter().any(|p| p.1.is_negative() && !p.0.is_unit()) {
                return None;
            }
            if !rc.rem(&lc).is_zero() {
                return None;
            }
            let qc = rc.div_exact(&lc);
            rem = rem.sub(&divisor.mul_term(&qm, &qc));
            quot.push((qm, qc));
            if quot.len() > 4 * (self.terms.len() + 16) * (divisor.terms.len() + 1) {
                return None;
            }
        }
        Some(Poly { terms: quot })
    }

    /// Maps every monomial through `f`; the result is re-sorted.
    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (f(m), c.clone())).collect())
    }

    /// Leading term under graded lex with the global symbol key order.
    pub fn key_lead(&self) -> Option<&Term> {
        self.terms.iter().max_by(|a, b| a.0.grlex_key_cmp(&b.0))
    }
}
