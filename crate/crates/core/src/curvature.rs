//! Tensors built from the curvature: the Kulkarni–Nomizu product, the
//! conformal, concircular, conharmonic, projective and Gaussian tensors,
//! Ricci powers, the `D·H` and `Q(A,H)` operators, cyclic sums,
//! divergences and the Einstein stress-energy tensor.

use crate::expr::{sum, Expr, Sym};
use crate::geometry::{Metric, ShapeError, Slot, Symmetry, Tensor};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurvatureError {
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("the acting tensor must be antisymmetric in its first two slots")]
    NotAntisymmetric,
    #[error("constant `{0}` is not declared")]
    MissingConstant(&'static str),
    #[error("expected a symmetric (0,2) tensor")]
    NotSymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DerivedKind {
    Conformal,
    Concircular,
    Conharmonic,
    Projective,
    Gaussian,
}

impl DerivedKind {
    pub const ALL: [DerivedKind; 5] = [
        DerivedKind::Conformal,
        DerivedKind::Concircular,
        DerivedKind::Conharmonic,
        DerivedKind::Projective,
        DerivedKind::Gaussian,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            DerivedKind::Conformal => "C",
            DerivedKind::Concircular => "W",
            DerivedKind::Conharmonic => "K",
            DerivedKind::Projective => "P",
            DerivedKind::Gaussian => "G",
        }
    }
}

fn check_symmetric(t: &Tensor) -> Result<(), CurvatureError> {
    t.expect_covariant(2)?;
    let n = t.dim();
    for i in 1..=n {
        for j in i + 1..=n {
            if t.get(&[i, j]) != t.get(&[j, i]) {
                return Err(CurvatureError::NotSymmetric);
            }
        }
    }
    Ok(())
}

/// `(A∧E)_abcd = A_ad E_bc + A_bc E_ad - A_ac E_bd - A_bd E_ac`.
pub fn kulkarni_nomizu(a: &Tensor, e: &Tensor) -> Result<Tensor, CurvatureError> {
    check_symmetric(a)?;
    check_symmetric(e)?;
    if a.dim() != e.dim() {
        return Err(ShapeError::Dimension(a.dim(), e.dim()).into());
    }
    Ok(Tensor::from_fn(a.dim(), &[Slot::Co; 4], Symmetry::RiemannType, |i| {
        let (p, q, r, s) = (i[0], i[1], i[2], i[3]);
        let t = |x: &Tensor, y: &Tensor, i: [usize; 2], j: [usize; 2]| x.get(&i).mul(y.get(&j));
        sum(vec![
            t(a, e, [p, s], [q, r]),
            t(a, e, [q, r], [p, s]),
            t(a, e, [p, r], [q, s]).neg(),
            t(a, e, [q, s], [p, r]).neg(),
        ])
    }))
}

/// One of the curvature tensors derived from `R`, `S`, `κ` and `g`.
pub fn derived(m: &Metric, kind: DerivedKind) -> Tensor {
    let n = m.dim() as i64;
    let (g, r, s, k) = (m.g(), m.riemann(), m.ricci(), m.scalar());
    let gg = || kulkarni_nomizu(g, g).expect("metric is symmetric");
    let gs = || kulkarni_nomizu(g, s).expect("Ricci tensor is symmetric");
    let sub = |a: &Tensor, b: &Tensor| a.sub(b).expect("same shape");
    let add = |a: &Tensor, b: &Tensor| a.add(b).expect("same shape");
    let t = match kind {
        DerivedKind::Conformal => {
            let c1 = gs().scale(&Expr::rational(1, n - 2));
            let c2 = gg().scale(&k.scale(1, 2 * (n - 2) * (n - 1)));
            add(&sub(r, &c1), &c2)
        }
        DerivedKind::Concircular => sub(r, &gg().scale(&k.scale(1, 2 * n * (n - 1)))),
        DerivedKind::Conharmonic => sub(r, &gs().scale(&Expr::rational(1, n - 2))),
        DerivedKind::Gaussian => gg().scale(&Expr::rational(1, 2)),
        DerivedKind::Projective => {
            let f = Expr::rational(1, n - 1);
            let t = Tensor::from_fn(m.dim(), &[Slot::Co; 4], Symmetry::AntiFirstPair, |i| {
                let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
                let corr = g.get(&[a, d]).mul(s.get(&[b, c])).sub(&g.get(&[b, d]).mul(s.get(&[a, c])));
                r.get(i).sub(&corr.mul(&f))
            });
            return m.reduce_tensor(&t);
        }
    };
    m.reduce_tensor(&t)
}

/// `A^k(X,Y) = A(𝒜^(k-1) X, Y)` where `g(𝒜X,Y) = A(X,Y)`.
pub fn ricci_power(m: &Metric, a: &Tensor, k: usize) -> Result<Tensor, CurvatureError> {
    check_symmetric(a)?;
    assert!(k >= 1, "powers start at 1");
    let n = m.dim();
    let inv = m.inverse();
    let mut cur = a.clone();
    for _ in 1..k {
        let prev = cur;
        cur = Tensor::from_fn(n, &[Slot::Co; 2], Symmetry::Symmetric, |i| {
            let mut terms = Vec::new();
            for e in 1..=n {
                if prev.get(&[i[0], e]).is_zero() {
                    continue;
                }
                for f in 1..=n {
                    let gef = inv.get(&[e, f]);
                    if !gef.is_zero() && !a.get(&[f, i[1]]).is_zero() {
                        terms.push(prev.get(&[i[0], e]).mul(gef).mul(a.get(&[f, i[1]])));
                    }
                }
            }
            m.reduce(sum(terms))
        });
    }
    Ok(cur)
}

/// `D·H`: every slot of `H` is acted on by the endomorphism `𝒟(X,Y)`,
/// covariant slots with a minus sign and contravariant slots with a plus
/// sign. The two new covariant slots come last.
pub fn dot_action(m: &Metric, d: &Tensor, h: &Tensor) -> Result<Tensor, CurvatureError> {
    d.expect_covariant(4)?;
    if !d.obeys(Symmetry::AntiFirstPair) {
        return Err(CurvatureError::NotAntisymmetric);
    }
    let n = m.dim();
    let op = m.raise(d, 4)?;
    let k = h.rank();
    let mut slots = h.slots().to_vec();
    slots.extend([Slot::Co, Slot::Co]);
    let t = Tensor::from_fn(n, &slots, Symmetry::None, |idx| {
        let (x, y) = (idx[k], idx[k + 1]);
        if x == y {
            return Expr::zero();
        }
        let base = &idx[..k];
        let mut src = base.to_vec();
        let mut terms = Vec::new();
        for s in 0..k {
            let i = base[s];
            for mm in 1..=n {
                src[s] = mm;
                let hv = h.get(&src);
                if hv.is_zero() {
                    continue;
                }
                match h.slots()[s] {
                    Slot::Co => {
                        let c = op.get(&[x, y, i, mm]);
                        if !c.is_zero() {
                            terms.push(c.mul(hv).neg());
                        }
                    }
                    Slot::Contra => {
                        let c = op.get(&[x, y, mm, i]);
                        if !c.is_zero() {
                            terms.push(c.mul(hv));
                        }
                    }
                }
            }
            src[s] = i;
        }
        m.reduce(sum(terms))
    });
    Ok(t)
}

/// Tachibana tensor `Q(A,H)(X1..Xk,X,Y) = Σ_s A(X,Xs) H(..Y..) - A(Y,Xs) H(..X..)`,
/// with `Y` (resp. `X`) in place of `Xs`.
pub fn q_operator(m: &Metric, a: &Tensor, h: &Tensor) -> Result<Tensor, CurvatureError> {
    check_symmetric(a)?;
    if !h.is_covariant() {
        return Err(ShapeError::Mismatch { expected: "a covariant tensor".into(), found: h.slots().to_vec() }.into());
    }
    let n = m.dim();
    let k = h.rank();
    let t = Tensor::from_fn(n, &vec![Slot::Co; k + 2], Symmetry::None, |idx| {
        let (x, y) = (idx[k], idx[k + 1]);
        if x == y {
            return Expr::zero();
        }
        let mut src = idx[..k].to_vec();
        let mut terms = Vec::new();
        for s in 0..k {
            let i = src[s];
            let ax = a.get(&[x, i]);
            if !ax.is_zero() {
                src[s] = y;
                terms.push(ax.mul(h.get(&src)));
            }
            let ay = a.get(&[y, i]);
            if !ay.is_zero() {
                src[s] = x;
                terms.push(ay.mul(h.get(&src)).neg());
            }
            src[s] = i;
        }
        m.reduce(sum(terms))
    });
    Ok(t)
}

/// Sum over the three cyclic rotations of the values in the given slots (1-based).
pub fn cyclic_sum(t: &Tensor, slots: [usize; 3]) -> Result<Tensor, CurvatureError> {
    let r = t.rank();
    for (k, s) in slots.iter().enumerate() {
        if *s == 0 || *s > r || slots[..k].contains(s) {
            return Err(ShapeError::BadSlot { slot: *s, rank: r }.into());
        }
    }
    let [p, q, s] = slots.map(|v| v - 1);
    Ok(Tensor::from_fn(t.dim(), t.slots(), Symmetry::None, |idx| {
        let mut terms = vec![t.get(idx).clone()];
        let mut j = idx.to_vec();
        for _ in 0..2 {
            let (a, b, c) = (j[p], j[q], j[s]);
            j[p] = b;
            j[q] = c;
            j[s] = a;
            terms.push(t.get(&j).clone());
        }
        sum(terms)
    }))
}

/// Trace of `∇t` over the derivative slot and `slot`.
pub fn divergence(m: &Metric, t: &Tensor, slot: usize) -> Result<Tensor, CurvatureError> {
    let r = t.rank();
    if slot == 0 || slot > r || t.slots()[slot - 1] != Slot::Co {
        return Err(ShapeError::BadSlot { slot, rank: r }.into());
    }
    let dt = m.covariant_derivative(t);
    Ok(m.trace(&dt, slot, r + 1)?)
}

fn constant(m: &Metric, name: &'static str) -> Result<Sym, CurvatureError> {
    m.chart().constant(name).ok_or(CurvatureError::MissingConstant(name))
}

/// `c^4/(8 pi G)`, the coupling between curvature and stress-energy.
pub fn einstein_coupling(m: &Metric) -> Result<Expr, CurvatureError> {
    let c = Expr::sym(constant(m, "c")?);
    let g = Expr::sym(constant(m, "G")?);
    let pi = Expr::sym(constant(m, "pi")?);
    Ok(c.pow(4).div(&pi.mul(&g).scale(8, 1)).expect("nonzero"))
}

/// `T = c^4/(8 pi G) (S - κ/2 g)`, zero cosmological constant.
pub fn energy_momentum(m: &Metric) -> Result<Tensor, CurvatureError> {
    let k = einstein_coupling(m)?;
    let half = m.scalar().scale(1, 2);
    let t = m.ricci().sub(&m.g().scale(&half))?;
    Ok(m.reduce_tensor(&t.scale(&k)).with_symmetry(Symmetry::Symmetric))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expr, AssumptionSet, Context};
    use crate::geometry::Chart;

    fn minkowski() -> Metric {
        let mut c = Context::new();
        for n in ["t", "u", "v", "z"] {
            c.add_coord(n, false).unwrap();
        }
        let mut g = Tensor::covariant(4, 2);
        for i in 1..=4 {
            g.set(&[i, i], Expr::int(if i == 1 { 1 } else { -1 }));
        }
        Metric::new(Chart::new(c).unwrap(), g, AssumptionSet::new()).unwrap()
    }

    #[test]
    fn kulkarni_nomizu_of_minkowski() {
        let m = minkowski();
        let gg = kulkarni_nomizu(m.g(), m.g()).unwrap();
        assert_eq!(gg.get(&[1, 2, 2, 1]), &Expr::int(-2));
        assert!(gg.obeys(Symmetry::RiemannType));
    }

    #[test]
    fn gaussian_tensor_acts_trivially_on_the_metric() {
        let m = minkowski();
        let gt = derived(&m, DerivedKind::Gaussian);
        assert!(dot_action(&m, &gt, m.g()).unwrap().is_zero());
    }

    #[test]
    fn q_of_a_symmetric_tensor_with_itself_vanishes() {
        let mut c = Context::new();
        for n in ["u", "r", "x", "y"] {
            c.add_coord(n, false).unwrap();
        }
        c.add_function("h", &["u", "x", "y"]).unwrap();
        let p = |s: &str| parse_expr(&c, s).unwrap();
        let mut g = Tensor::covariant(4, 2);
        g.set(&[1, 1], p("h"));
        g.set(&[1, 2], p("1"));
        g.set(&[2, 1], p("1"));
        g.set(&[3, 3], p("1"));
        g.set(&[4, 4], p("1"));
        let mut a = Tensor::covariant(4, 2);
        for (i, j, v) in [(1, 1, "x*y"), (1, 3, "r"), (3, 1, "r"), (4, 4, "h_x")] {
            a.set(&[i, j], p(v));
        }
        let m = Metric::new(Chart::new(c.clone()).unwrap(), g, AssumptionSet::new()).unwrap();
        assert!(q_operator(&m, &a, &a).unwrap().is_zero());
        let q = q_operator(&m, m.g(), m.riemann()).unwrap();
        for idx in q.indices() {
            let mut sw = idx.clone();
            sw.swap(4, 5);
            assert!(q.get(&idx).add(q.get(&sw)).is_zero());
        }
        let cyc = cyclic_sum(m.riemann(), [1, 2, 3]).unwrap();
        assert!(cyc.is_zero());
        assert!(cyclic_sum(m.riemann(), [1, 1, 3]).is_err());
    }
}
