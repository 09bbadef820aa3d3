//! Linear systems over the field of rational functions, solved by
//! incremental reduction to row echelon form.

use crate::expr::poly::Monomial;
use crate::expr::{Expr, Sym, SymbolData};
use crate::geometry::Metric;

/// Pivot preference: nonzero constants first, then the smallest expression.
fn cost(e: &Expr) -> (u8, usize) {
    (u8::from(!e.is_constant()), e.size())
}

/// Whether `e` is nonzero without further hypotheses: a monomial quotient in
/// constants, positive coordinates and exponential units, or a multiple of a
/// declared nonzero expression.
pub fn known_nonzero(m: &Metric, e: &Expr) -> bool {
    if e.is_zero() {
        return false;
    }
    if e.num().is_monomial() && e.den().is_monomial() && e.vars().iter().all(|s| safe(m, *s)) {
        return true;
    }
    m.assumptions().declared_nonzero(e)
}

fn safe(m: &Metric, s: Sym) -> bool {
    match s.data() {
        SymbolData::Const { .. } | SymbolData::ExpAtom { .. } => true,
        SymbolData::Coord { .. } => m.chart().is_positive_coord(s),
        SymbolData::Func { .. } => false,
    }
}

/// What dividing by `e` requires beyond the known facts: its numerator
/// without integer content and safe monomial factors, or `None`.
pub fn nonzero_condition(m: &Metric, e: &Expr) -> Option<Expr> {
    if e.is_zero() || known_nonzero(m, e) {
        return None;
    }
    let num = e.num();
    let content = Monomial::from_pairs(num.monomial_content().iter().filter(|(s, _)| safe(m, *s)).cloned());
    let mut p = num.mul_monomial(&content.inv()).div_scalar_exact(&num.content());
    if p.key_lead().is_some_and(|(_, c)| c.is_negative()) {
        p = p.neg();
    }
    let f = Expr::from_poly(p);
    (!known_nonzero(m, &f)).then_some(f)
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<Expr>,
    rhs: Expr,
    label: Vec<usize>,
}

impl Row {
    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Expr::is_zero)
    }

    /// `self -= k * other`.
    fn sub_scaled(&mut self, k: &Expr, other: &Row) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a = a.sub(&k.mul(b));
            }
        }
        if !other.rhs.is_zero() {
            self.rhs = self.rhs.sub(&k.mul(&other.rhs));
        }
    }
}

/// `Σ_j coeffs[j] * unknown_j = rhs`, one row per equation.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    unknowns: Vec<String>,
    rows: Vec<Row>,
}

/// An inconsistent system: the equation with this label reduces to
/// `0 = residual`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inconsistency {
    pub label: Vec<usize>,
    pub residual: Expr,
    pub pivots: Vec<Expr>,
}

/// Affine solution set `particular + span(basis)`. `pivots` lists the
/// non-constant expressions divided by during elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSpace {
    pub unknowns: Vec<String>,
    pub particular: Vec<Expr>,
    pub basis: Vec<Vec<Expr>>,
    pub pivots: Vec<Expr>,
}

impl LinearSystem {
    pub fn new(unknowns: Vec<String>) -> LinearSystem {
        LinearSystem { unknowns, rows: Vec::new() }
    }

    pub fn with_count(prefix: &str, n: usize) -> LinearSystem {
        LinearSystem::new((1..=n).map(|i| format!("{prefix}{i}")).collect())
    }

    pub fn unknowns(&self) -> &[String] {
        &self.unknowns
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Adds an equation; all-zero equations are dropped.
    pub fn push(&mut self, coeffs: Vec<Expr>, rhs: Expr) {
        let label = vec![self.rows.len()];
        self.push_labeled(label, coeffs, rhs);
    }

    /// Adds an equation tagged with a component index for diagnostics.
    pub fn push_labeled(&mut self, label: Vec<usize>, coeffs: Vec<Expr>, rhs: Expr) {
        assert_eq!(coeffs.len(), self.unknowns.len());
        let row = Row { coeffs, rhs, label };
        if row.is_trivial() && row.rhs.is_zero() {
            return;
        }
        self.rows.push(row);
    }

    /// Adds `Σ coefficient * unknown[index] = rhs`.
    pub fn push_sparse(&mut self, label: Vec<usize>, terms: &[(Expr, usize)], rhs: Expr) {
        let mut coeffs = vec![Expr::zero(); self.unknowns.len()];
        for (c, j) in terms {
            if !c.is_zero() {
                coeffs[*j] = coeffs[*j].add(c);
            }
        }
        self.push_labeled(label, coeffs, rhs);
    }

    pub fn solve(&self) -> Result<SolutionSpace, Inconsistency> {
        let n = self.unknowns.len();
        let mut reduced: Vec<(usize, Row)> = Vec::new();
        let mut pivots: Vec<Expr> = Vec::new();
        for row in &self.rows {
            let mut row = row.clone();
            for (c, pr) in &reduced {
                let f = row.coeffs[*c].clone();
                if !f.is_zero() {
                    row.sub_scaled(&f, pr);
                }
            }
            if row.is_trivial() {
                if row.rhs.is_zero() {
                    continue;
                }
                return Err(Inconsistency { label: row.label, residual: row.rhs, pivots });
            }
            let col = (0..n).filter(|j| !row.coeffs[*j].is_zero()).min_by_key(|j| cost(&row.coeffs[*j])).expect("nontrivial row");
            let piv = row.coeffs[col].clone();
            if !piv.is_constant() && !pivots.contains(&piv) {
                pivots.push(piv.clone());
            }
            let inv = piv.recip().expect("nonzero pivot");
            for a in row.coeffs.iter_mut() {
                if !a.is_zero() {
                    *a = a.mul(&inv);
                }
            }
            row.rhs = row.rhs.mul(&inv);
            for (_, pr) in reduced.iter_mut() {
                let f = pr.coeffs[col].clone();
                if !f.is_zero() {
                    pr.sub_scaled(&f, &row);
                }
            }
            reduced.push((col, row));
        }
        let pivot_cols: Vec<usize> = reduced.iter().map(|(c, _)| *c).collect();
        let mut particular = vec![Expr::zero(); n];
        for (c, r) in &reduced {
            particular[*c] = r.rhs.clone();
        }
        let mut basis = Vec::new();
        for free in (0..n).filter(|j| !pivot_cols.contains(j)) {
            let mut v = vec![Expr::zero(); n];
            v[free] = Expr::one();
            for (c, r) in &reduced {
                v[*c] = r.coeffs[free].neg();
            }
            basis.push(v);
        }
        Ok(SolutionSpace { unknowns: self.unknowns.clone(), particular, basis, pivots })
    }
}

impl SolutionSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn is_unique(&self) -> bool {
        self.basis.is_empty()
    }

    /// Whether `v` lies in the affine solution set.
    pub fn contains(&self, v: &[Expr]) -> bool {
        assert_eq!(v.len(), self.unknowns.len());
        let mut sys = LinearSystem::with_count("t", self.basis.len());
        for i in 0..v.len() {
            let coeffs = self.basis.iter().map(|b| b[i].clone()).collect();
            sys.push(coeffs, v[i].sub(&self.particular[i]));
        }
        sys.solve().is_ok()
    }

    /// Whether the homogeneous part contains a vector, up to scaling.
    pub fn spans(&self, v: &[Expr]) -> bool {
        let mut sys = LinearSystem::with_count("t", self.basis.len());
        for i in 0..v.len() {
            sys.push(self.basis.iter().map(|b| b[i].clone()).collect(), v[i].clone());
        }
        sys.solve().is_ok()
    }

    /// Values of the unknowns whose names start with `prefix`, in order.
    pub fn group<'a>(&'a self, v: &'a [Expr], prefix: &str) -> Vec<&'a Expr> {
        self.unknowns.iter().zip(v).filter(|(n, _)| n.starts_with(prefix)).map(|(_, e)| e).collect()
    }
}
