use std::sync::OnceLock;

use rayon::prelude::*;

use super::chart::Chart;
use super::tensor::{ShapeError, Slot, Symmetry, Tensor};
use crate::expr::{sum, AssumptionError, AssumptionSet, Expr};
use crate::linalg;

/// Orientation of the curvature operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvatureSign {
    /// `R(X,Y) = [∇X, ∇Y] - ∇[X,Y]`.
    Standard,
    /// The negative of `Standard`.
    Reversed,
}

/// Convention used by [`Metric::riemann`].
pub const CURVATURE_SIGN: CurvatureSign = CurvatureSign::Reversed;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("the metric is singular")]
    Singular,
    #[error("the metric is not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Assumption(#[from] AssumptionError),
}

/// Metric tensor with its inverse, determinant and Christoffel symbols.
/// Curvature tensors are computed on first use and cached.
#[derive(Debug, Clone)]
pub struct Metric {
    chart: Chart,
    assumptions: AssumptionSet,
    g: Tensor,
    inv: Tensor,
    det: Expr,
    gamma: Tensor,
    riemann: OnceLock<Tensor>,
    ricci: OnceLock<Tensor>,
    scalar: OnceLock<Expr>,
}

impl Metric {
    /// Builds the metric from symmetric covariant components. The
    /// assumptions are applied first and the determinant is recorded as
    /// nonzero.
    pub fn new(chart: Chart, components: Tensor, assumptions: AssumptionSet) -> Result<Metric, GeometryError> {
        let n = chart.dim();
        components.expect_covariant(2)?;
        if components.dim() != n {
            return Err(ShapeError::Dimension(n, components.dim()).into());
        }
        let g = components.substitute(&assumptions)?;
        for i in 1..=n {
            for j in i + 1..=n {
                if g.get(&[i, j]) != g.get(&[j, i]) {
                    return Err(GeometryError::NotSymmetric(i, j));
                }
            }
        }
        let g = g.with_symmetry(Symmetry::Symmetric);
        let m: linalg::Matrix = (1..=n).map(|i| (1..=n).map(|j| g.get(&[i, j]).clone()).collect()).collect();
        let (det, inv_m) = linalg::inverse(&m).ok_or(GeometryError::Singular)?;
        let inv = Tensor::from_fn(n, &[Slot::Contra, Slot::Contra], Symmetry::Symmetric, |i| inv_m[i[0] - 1][i[1] - 1].clone());
        let mut assumptions = assumptions;
        assumptions.push_nonzero(det.clone());
        let mut metric = Metric {
            chart,
            assumptions,
            g,
            inv,
            det,
            gamma: Tensor::zeros(n, &[Slot::Contra, Slot::Co, Slot::Co]),
            riemann: OnceLock::new(),
            ricci: OnceLock::new(),
            scalar: OnceLock::new(),
        };
        metric.gamma = metric.christoffel_symbols();
        Ok(metric)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn assumptions(&self) -> &AssumptionSet {
        &self.assumptions
    }

    pub fn g(&self) -> &Tensor {
        &self.g
    }

    pub fn inverse(&self) -> &Tensor {
        &self.inv
    }

    pub fn det(&self) -> &Expr {
        &self.det
    }

    /// `Γ^k_ij` stored at index `[k, i, j]`.
    pub fn christoffel(&self) -> &Tensor {
        &self.gamma
    }

    fn gam(&self, k: usize, i: usize, j: usize) -> &Expr {
        self.gamma.get(&[k, i, j])
    }

    /// Rewrites `e` with the metric's substitution rules.
    pub fn reduce(&self, e: Expr) -> Expr {
        // denominators of derived quantities divide powers of the metric's
        // own denominators, which were rewritten before inversion
        self.assumptions.apply(&e).expect("assumptions validated with the metric")
    }

    pub fn reduce_tensor(&self, t: &Tensor) -> Tensor {
        if self.assumptions.substitutions().is_empty() {
            t.clone()
        } else {
            t.map(|e| self.reduce(e.clone()))
        }
    }

    /// Partial derivative along the `i`-th coordinate.
    pub fn d(&self, e: &Expr, i: usize) -> Expr {
        self.reduce(e.diff(self.chart.coord_sym(i)))
    }

    fn christoffel_symbols(&self) -> Tensor {
        let n = self.dim();
        // first kind: [l; i j] = (d_i g_lj + d_j g_li - d_l g_ij) / 2
        let dg: Vec<Vec<Vec<Expr>>> = (1..=n)
            .into_par_iter()
            .map(|k| (1..=n).map(|i| (1..=n).map(|j| self.d(self.g.get(&[i, j]), k)).collect()).collect())
            .collect();
        let first = |l: usize, i: usize, j: usize| {
            dg[i - 1][l - 1][j - 1].add(&dg[j - 1][l - 1][i - 1]).sub(&dg[l - 1][i - 1][j - 1]).scale(1, 2)
        };
        Tensor::from_fn(n, &[Slot::Contra, Slot::Co, Slot::Co], Symmetry::None, |idx| {
            let (k, i, j) = (idx[0], idx[1], idx[2]);
            let terms = (1..=n)
                .filter(|l| !self.inv.get(&[k, *l]).is_zero())
                .map(|l| self.inv.get(&[k, l]).mul(&first(l, i, j)))
                .collect();
            self.reduce(sum(terms))
        })
    }

    /// `R(∂a,∂b)∂c` as components `[e, a, b, c]` along `∂e`, for the given sign.
    fn curvature_operator(&self, sign: CurvatureSign) -> Tensor {
        let n = self.dim();
        let t = Tensor::from_fn(n, &[Slot::Contra, Slot::Co, Slot::Co, Slot::Co], Symmetry::None, |idx| {
            let (e, a, b, c) = (idx[0], idx[1], idx[2], idx[3]);
            if a >= b {
                return Expr::zero();
            }
            let mut terms = vec![self.d(self.gam(e, b, c), a), self.d(self.gam(e, a, c), b).neg()];
            for f in 1..=n {
                terms.push(self.gam(f, b, c).mul(self.gam(e, a, f)));
                terms.push(self.gam(f, a, c).mul(self.gam(e, b, f)).neg());
            }
            let v = self.reduce(sum(terms));
            match sign {
                CurvatureSign::Standard => v,
                CurvatureSign::Reversed => v.neg(),
            }
        });
        // fill the a > b half by antisymmetry
        let mut out = t.clone();
        for idx in t.indices() {
            if idx[1] > idx[2] {
                let v = t.get(&[idx[0], idx[2], idx[1], idx[3]]).neg();
                out.set(&idx, v);
            }
        }
        out
    }

    /// Covariant curvature tensor for an explicit sign convention.
    pub fn riemann_with(&self, sign: CurvatureSign) -> Tensor {
        let n = self.dim();
        let op = self.curvature_operator(sign);
        Tensor::from_fn(n, &[Slot::Co; 4], Symmetry::RiemannType, |idx| {
            let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
            let terms = (1..=n)
                .filter(|e| !self.g.get(&[d, *e]).is_zero())
                .map(|e| self.g.get(&[d, e]).mul(op.get(&[e, a, b, c])))
                .collect();
            self.reduce(sum(terms))
        })
    }

    /// `R(X1,X2,X3,X4) = g(R(X1,X2)X3, X4)`.
    pub fn riemann(&self) -> &Tensor {
        self.riemann.get_or_init(|| self.riemann_with(CURVATURE_SIGN))
    }

    /// The curvature operator as a (1,3) tensor: slot 4 of [`Metric::riemann`] raised.
    pub fn riemann_operator(&self) -> Tensor {
        self.raise(self.riemann(), 4).expect("slot 4 is covariant")
    }

    /// `S_bc = g^ad R_abcd`.
    pub fn ricci(&self) -> &Tensor {
        self.ricci.get_or_init(|| {
            let s = self.trace(self.riemann(), 1, 4).expect("rank 4 covariant");
            s.with_symmetry(Symmetry::Symmetric)
        })
    }

    /// Scalar curvature, the g-trace of the Ricci tensor.
    pub fn scalar(&self) -> &Expr {
        self.scalar.get_or_init(|| {
            let t = self.trace(self.ricci(), 1, 2).expect("rank 2 covariant");
            t.components()[0].clone()
        })
    }

    /// Contracts two covariant slots (1-based) with the inverse metric.
    pub fn trace(&self, t: &Tensor, s1: usize, s2: usize) -> Result<Tensor, ShapeError> {
        let r = t.rank();
        for s in [s1, s2] {
            if s == 0 || s > r || t.slots()[s - 1] != Slot::Co {
                return Err(ShapeError::BadSlot { slot: s, rank: r });
            }
        }
        if s1 == s2 {
            return Err(ShapeError::BadSlot { slot: s2, rank: r });
        }
        let n = self.dim();
        let keep: Vec<usize> = (0..r).filter(|k| *k != s1 - 1 && *k != s2 - 1).collect();
        let slots: Vec<Slot> = keep.iter().map(|k| t.slots()[*k]).collect();
        let pairs: Vec<(usize, usize, Expr)> = (1..=n)
            .flat_map(|i| (1..=n).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let v = self.inv.get(&[i, j]);
                (!v.is_zero()).then(|| (i, j, v.clone()))
            })
            .collect();
        let build = |idx: &[usize]| {
            let mut full = vec![0; r];
            for (k, v) in keep.iter().zip(idx) {
                full[*k] = *v;
            }
            let terms = pairs
                .iter()
                .map(|(i, j, gij)| {
                    full[s1 - 1] = *i;
                    full[s2 - 1] = *j;
                    gij.mul(t.get(&full))
                })
                .collect();
            self.reduce(sum(terms))
        };
        if slots.is_empty() {
            let mut out = Tensor::zeros(n, &[]);
            out.set(&[], build(&[]));
            return Ok(out);
        }
        Ok(Tensor::from_fn(n, &slots, Symmetry::None, build))
    }

    fn move_index(&self, t: &Tensor, slot: usize, from: Slot, to: Slot) -> Result<Tensor, ShapeError> {
        let r = t.rank();
        if slot == 0 || slot > r || t.slots()[slot - 1] != from {
            return Err(ShapeError::BadSlot { slot, rank: r });
        }
        let mut slots = t.slots().to_vec();
        slots[slot - 1] = to;
        let m = if to == Slot::Contra { &self.inv } else { &self.g };
        let n = self.dim();
        Ok(Tensor::from_fn(n, &slots, Symmetry::None, |idx| {
            let mut src = idx.to_vec();
            let i = idx[slot - 1];
            let terms = (1..=n)
                .filter(|j| !m.get(&[i, *j]).is_zero())
                .map(|j| {
                    src[slot - 1] = j;
                    m.get(&[i, j]).mul(t.get(&src))
                })
                .collect();
            self.reduce(sum(terms))
        }))
    }

    /// Raises a covariant slot (1-based).
    pub fn raise(&self, t: &Tensor, slot: usize) -> Result<Tensor, ShapeError> {
        self.move_index(t, slot, Slot::Co, Slot::Contra)
    }

    /// Lowers a contravariant slot (1-based).
    pub fn lower(&self, t: &Tensor, slot: usize) -> Result<Tensor, ShapeError> {
        self.move_index(t, slot, Slot::Contra, Slot::Co)
    }

    /// Covariant derivative; the derivative index is the new last slot.
    pub fn covariant_derivative(&self, t: &Tensor) -> Tensor {
        let n = self.dim();
        let r = t.rank();
        let mut slots = t.slots().to_vec();
        slots.push(Slot::Co);
        Tensor::from_fn(n, &slots, t.symmetry(), |idx| {
            let m = idx[r];
            let base = &idx[..r];
            let mut terms = vec![self.d(t.get(base), m)];
            let mut src = base.to_vec();
            for s in 0..r {
                let i = base[s];
                for e in 1..=n {
                    src[s] = e;
                    let v = t.get(&src);
                    if v.is_zero() {
                        continue;
                    }
                    match t.slots()[s] {
                        Slot::Co => {
                            let gm = self.gam(e, m, i);
                            if !gm.is_zero() {
                                terms.push(gm.mul(v).neg());
                            }
                        }
                        Slot::Contra => {
                            let gm = self.gam(i, m, e);
                            if !gm.is_zero() {
                                terms.push(gm.mul(v));
                            }
                        }
                    }
                }
                src[s] = i;
            }
            self.reduce(sum(terms))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expr, Context};

    fn chart(names: &[&str]) -> Chart {
        let mut c = Context::new();
        for n in names {
            c.add_coord(n, *n == "x").unwrap();
        }
        Chart::new(c).unwrap()
    }

    fn metric(ch: Chart, rows: &[&[&str]]) -> Metric {
        let n = rows.len();
        let mut g = Tensor::covariant(n, 2);
        for i in 0..n {
            for j in 0..n {
                g.set(&[i + 1, j + 1], parse_expr(&ch, rows[i][j]).unwrap());
            }
        }
        Metric::new(ch, g, AssumptionSet::new()).unwrap()
    }

    #[test]
    fn minkowski_is_self_inverse_and_flat() {
        let m = metric(
            chart(&["t", "u", "v", "z"]),
            &[&["1", "0", "0", "0"], &["0", "-1", "0", "0"], &["0", "0", "-1", "0"], &["0", "0", "0", "-1"]],
        );
        assert_eq!(m.inverse().components(), m.g().components());
        assert!(m.christoffel().is_zero());
        assert!(m.riemann().is_zero());
        assert!(m.scalar().is_zero());
    }

    #[test]
    fn hyperbolic_space_in_both_orientations() {
        let m = metric(chart(&["x", "y", "z"]), &[&["1/x^2", "0", "0"], &["0", "1/x^2", "0"], &["0", "0", "1/x^2"]]);
        let g = m.g();
        let std = m.riemann_with(CurvatureSign::Standard);
        let rev = m.riemann_with(CurvatureSign::Reversed);
        // space form with K = -1: R_abcd = K (g_ad g_bc - g_ac g_bd)
        for (a, b, c, d) in [(1, 2, 1, 2), (1, 3, 1, 3), (2, 3, 2, 3), (1, 2, 2, 1)] {
            let model = g.get(&[a, d]).mul(g.get(&[b, c])).sub(&g.get(&[a, c]).mul(g.get(&[b, d]))).neg();
            assert_eq!(std.get(&[a, b, c, d]), &model, "R{a}{b}{c}{d}");
            assert_eq!(rev.get(&[a, b, c, d]), &model.neg());
        }
        assert_eq!(m.riemann(), &rev);
        // the fixed orientation contracts to minus the textbook Ricci tensor
        assert_eq!(m.scalar(), &Expr::int(6));
    }

    #[test]
    fn bianchi_and_compatibility_hold_on_a_generic_metric() {
        let mut c = Context::new();
        for n in ["u", "r", "x", "y"] {
            c.add_coord(n, n == "x").unwrap();
        }
        c.add_function("h", &["u", "x", "y"]).unwrap();
        let ch = Chart::new(c).unwrap();
        let m = metric(
            ch,
            &[&["x*h", "1", "-2*r/x", "0"], &["1", "0", "0", "0"], &["-2*r/x", "0", "-1", "0"], &["0", "0", "0", "-x"]],
        );
        assert!(m.covariant_derivative(m.g()).is_zero());
        let r = m.riemann();
        assert!(r.obeys(Symmetry::RiemannType));
        for a in 1..=4 {
            for b in 1..=4 {
                for c in 1..=4 {
                    for d in 1..=4 {
                        let s = r.get(&[a, b, c, d]).add(r.get(&[b, c, a, d])).add(r.get(&[c, a, b, d]));
                        assert!(s.is_zero());
                    }
                }
            }
        }
        let dr = m.covariant_derivative(r);
        for idx in dr.indices() {
            let (a, b, c, d, e) = (idx[0], idx[1], idx[2], idx[3], idx[4]);
            let s = dr.get(&[a, b, c, d, e]).add(dr.get(&[b, e, c, d, a])).add(dr.get(&[e, a, c, d, b]));
            assert!(s.is_zero());
        }
        let up = m.raise(m.ricci(), 1).unwrap();
        assert_eq!(m.lower(&up, 1).unwrap().components(), m.ricci().components());
    }
}
