//! Multivariate polynomial gcd over the integers.
//!
//! The common case in curvature computations is a trivial gcd, so every
//! recursion level first bounds the gcd degree in each variable from a
//! univariate image modulo a large prime. A zero bound proves the gcd does
//! not involve that variable (the image is taken at a point where both
//! leading coefficients survive). Only when every bound is positive do we
//! fall back to a primitive pseudo-remainder sequence.

use rustc_hash::FxHashMap;

use super::int::Int;
use super::poly::{Exp, Monomial, Poly};
use super::symbol::Sym;

const P: u64 = (1u64 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn submod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn powmod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b);
        }
        b = mulmod(b, b);
        e >>= 1;
    }
    r
}

fn invmod(a: u64) -> u64 {
    powmod(a, P - 2)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn point_value(s: Sym, attempt: u64) -> u64 {
    splitmix((s.id() as u64) << 16 ^ attempt.wrapping_mul(0x1234_5678_9abc)) % (P - 2) + 2
}

/// Dense univariate image in `v` with all other generators evaluated.
fn image(p: &Poly, v: Sym, attempt: u64) -> Vec<u64> {
    let deg = p.max_exp(v).numer() as usize;
    let mut out = vec![0u64; deg + 1];
    let mut cache: FxHashMap<(Sym, i64), u64> = FxHashMap::default();
    for (m, c) in p.terms() {
        let mut val = c.mod_u64(P);
        let mut k = 0usize;
        for (s, e) in m.iter() {
            if *s == v {
                k = e.numer() as usize;
                continue;
            }
            let pv = *cache
                .entry((*s, e.numer()))
                .or_insert_with(|| powmod(point_value(*s, attempt), e.numer() as u64));
            val = mulmod(val, pv);
        }
        out[k] = addmod(out[k], val);
    }
    out
}

fn trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn uni_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim(&mut a);
    trim(&mut b);
    loop {
        if b.len() == 1 && b[0] == 0 {
            return a.len() - 1;
        }
        // a mod b
        let lb = *b.last().unwrap();
        let inv = invmod(lb);
        while a.len() >= b.len() && !(a.len() == 1 && a[0] == 0) {
            let la = *a.last().unwrap();
            if la == 0 {
                a.pop();
                if a.is_empty() {
                    a.push(0);
                }
                continue;
            }
            let q = mulmod(la, inv);
            let shift = a.len() - b.len();
            for (i, bi) in b.iter().enumerate() {
                a[i + shift] = submod(a[i + shift], mulmod(q, *bi));
            }
            a.pop();
            if a.is_empty() {
                a.push(0);
            }
        }
        trim(&mut a);
        std::mem::swap(&mut a, &mut b);
    }
}

/// Upper bound for the degree in `v` of gcd(a, b).
fn degree_bound(a: &Poly, b: &Poly, v: Sym) -> usize {
    let da = a.max_exp(v).numer() as usize;
    let db = b.max_exp(v).numer() as usize;
    for attempt in 0..8u64 {
        let ia = image(a, v, attempt);
        let ib = image(b, v, attempt);
        if ia[da] == 0 || ib[db] == 0 {
            continue;
        }
        return uni_gcd_degree(ia, ib);
    }
    da.min(db)
}

/// Divides out the integer content and makes the leading coefficient positive.
pub fn primitive(p: &Poly) -> Poly {
    if p.is_zero() {
        return Poly::zero();
    }
    let c = p.content();
    let q = p.div_scalar_exact(&c);
    if q.lead().map(|t| t.1.is_negative()).unwrap_or(false) {
        q.neg()
    } else {
        q
    }
}

fn strip_monomial(p: &Poly) -> (Monomial, Poly) {
    let m = p.monomial_content();
    if m.is_one() {
        (m, p.clone())
    } else {
        let q = p.mul_monomial(&m.inv());
        (m, q)
    }
}

/// Gcd of polynomials with non-negative integer exponents.
fn gcd_int(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return primitive(b);
    }
    if b.is_zero() {
        return primitive(a);
    }
    let (ma, a) = strip_monomial(a);
    let (mb, b) = strip_monomial(b);
    let gm = Poly::monomial(ma.min_with(&mb), Int::ONE);
    if a.is_constant() || b.is_constant() {
        return gm;
    }
    if a == b {
        return gm.mul(&primitive(&a));
    }
    let va = a.vars();
    let vb = b.vars();
    if let Some(v) = va.iter().find(|v| vb.binary_search(v).is_err()) {
        return gm.mul(&gcd_with_coeffs(&b, &a, *v));
    }
    if let Some(v) = vb.iter().find(|v| va.binary_search(v).is_err()) {
        return gm.mul(&gcd_with_coeffs(&a, &b, *v));
    }
    let mut best: Option<(Sym, usize)> = None;
    for &v in &va {
        let d = degree_bound(&a, &b, v);
        if d == 0 {
            // gcd is free of v: it divides every coefficient in v of both
            let mut g = gcd_with_coeffs_all(&a, v);
            if !g.is_constant() {
                for (_, c) in b.coeffs_in(v) {
                    g = gcd_int(&g, &c);
                    if g.is_constant() {
                        break;
                    }
                }
            }
            return gm.mul(&primitive(&g));
        }
        let deg = a.max_exp(v).numer().min(b.max_exp(v).numer()) as usize;
        if best.map(|(_, bd)| deg < bd).unwrap_or(true) {
            best = Some((v, deg));
        }
    }
    let (v, _) = best.expect("non-constant polynomials share a variable");
    gm.mul(&prs_gcd(&a, &b, v))
}

/// gcd(p, coefficients of q in v), where p is free of v.
fn gcd_with_coeffs(p: &Poly, q: &Poly, v: Sym) -> Poly {
    let mut g = primitive(p);
    for (_, c) in q.coeffs_in(v) {
        g = gcd_int(&g, &c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

fn gcd_with_coeffs_all(q: &Poly, v: Sym) -> Poly {
    let cs = q.coeffs_in(v);
    let mut g = Poly::zero();
    for (_, c) in cs {
        g = gcd_int(&g, &c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

fn deg_in(p: &Poly, v: Sym) -> i64 {
    p.max_exp(v).numer()
}

fn coeff_of(p: &Poly, v: Sym, d: i64) -> Poly {
    let terms: Vec<(Monomial, Int)> = p
        .terms()
        .iter()
        .filter(|(m, _)| m.exp_of(v) == Exp::int(d))
        .map(|(m, c)| (m.without(v), c.clone()))
        .collect();
    Poly::from_terms(terms)
}

fn prem(a: &Poly, b: &Poly, v: Sym) -> Poly {
    let n = deg_in(b, v);
    let lcb = coeff_of(b, v, n);
    let mut r = a.clone();
    let mut e = deg_in(a, v) - n + 1;
    while !r.is_zero() && deg_in(&r, v) >= n {
        let d = deg_in(&r, v);
        let lcr = coeff_of(&r, v, d);
        let shift = Poly::monomial(Monomial::var(v, Exp::int(d - n)), Int::ONE);
        r = lcb.mul(&r).sub(&lcr.mul(&shift).mul(b));
        e -= 1;
    }
    if e > 0 {
        r = lcb.pow(e as u32).mul(&r);
    }
    r
}

fn content_in(p: &Poly, v: Sym) -> Poly {
    gcd_with_coeffs_all(p, v)
}

fn prs_gcd(a: &Poly, b: &Poly, v: Sym) -> Poly {
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd_int(&ca, &cb);
    let mut pa = primitive(&a.div_exact(&ca).expect("content divides"));
    let mut pb = primitive(&b.div_exact(&cb).expect("content divides"));
    if deg_in(&pa, v) < deg_in(&pb, v) {
        std::mem::swap(&mut pa, &mut pb);
    }
    let g = loop {
        let r = prem(&pa, &pb, v);
        if r.is_zero() {
            break pb;
        }
        if deg_in(&r, v) == 0 {
            break Poly::one();
        }
        let cr = content_in(&r, v);
        let r = primitive(&r.div_exact(&cr).expect("content divides"));
        pa = pb;
        pb = r;
    };
    primitive(&c.mul(&g))
}

fn lcm_i64(a: i64, b: i64) -> i64 {
    use num_integer::Integer;
    a.lcm(&b)
}

/// Gcd of two polynomials in the general exponent space.
///
/// The result has no unit content, a positive leading coefficient and
/// integer content one (except for the zero/zero case).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() && b.is_zero() {
        return Poly::zero();
    }
    if a.is_zero() || b.is_zero() {
        let p = if a.is_zero() { b } else { a };
        let (m, q) = strip_monomial(p);
        let (ord, _) = m.split_units();
        return primitive(&q.mul_monomial(&ord));
    }
    let (ma, a1) = strip_monomial(a);
    let (mb, b1) = strip_monomial(b);
    let (oa, _) = ma.split_units();
    let (ob, _) = mb.split_units();
    let gm = oa.min_with(&ob);
    if a1.is_monomial() || b1.is_monomial() {
        return Poly::monomial(gm, Int::ONE);
    }
    // scale rational exponents to integers, per generator
    let mut scale: FxHashMap<Sym, i64> = FxHashMap::default();
    for p in [&a1, &b1] {
        for (m, _) in p.terms() {
            for (s, e) in m.iter() {
                if !e.is_integer() {
                    let l = scale.entry(*s).or_insert(1);
                    *l = lcm_i64(*l, e.denom());
                }
            }
        }
    }
    let g = if scale.is_empty() {
        gcd_int(&a1, &b1)
    } else {
        let fwd = |m: &Monomial| {
            Monomial::from_pairs(m.iter().map(|(s, e)| (*s, e.mul(Exp::int(*scale.get(s).unwrap_or(&1))))))
        };
        let back = |m: &Monomial| {
            Monomial::from_pairs(m.iter().map(|(s, e)| (*s, e.mul(Exp::new(1, *scale.get(s).unwrap_or(&1))))))
        };
        let g = gcd_int(&a1.map_monomials(fwd), &b1.map_monomials(fwd));
        g.map_monomials(back)
    };
    primitive(&g.mul_monomial(&gm))
}
