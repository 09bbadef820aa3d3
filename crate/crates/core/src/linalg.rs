//! Exact Gaussian elimination over the field of rational functions.

use crate::expr::Expr;

pub type Matrix = Vec<Vec<Expr>>;

/// Pivot preference: nonzero constants first, then the smallest expression.
fn pivot_cost(e: &Expr) -> (u8, usize) {
    (u8::from(!e.is_constant()), e.size())
}

fn best_pivot(m: &Matrix, col: usize, from: usize) -> Option<usize> {
    (from..m.len()).filter(|r| !m[*r][col].is_zero()).min_by_key(|r| pivot_cost(&m[*r][col]))
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Expr::one() } else { Expr::zero() }).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| crate::expr::sum((0..inner).map(|k| row[k].mul(&b[k][j])).collect()))
                .collect()
        })
        .collect()
}

/// Determinant and inverse of a square matrix; `None` if it is singular.
pub fn inverse(m: &Matrix) -> Option<(Expr, Matrix)> {
    let n = m.len();
    let mut a: Matrix = m.clone();
    let mut inv = identity(n);
    let mut det = Expr::one();
    for col in 0..n {
        let p = best_pivot(&a, col, col)?;
        if p != col {
            a.swap(p, col);
            inv.swap(p, col);
            det = det.neg();
        }
        let piv = a[col][col].clone();
        det = det.mul(&piv);
        let r = piv.recip()?;
        for j in 0..n {
            a[col][j] = a[col][j].mul(&r);
            inv[col][j] = inv[col][j].mul(&r);
        }
        for i in 0..n {
            if i == col || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for j in 0..n {
                let t = a[col][j].mul(&f);
                a[i][j] = a[i][j].sub(&t);
                let t = inv[col][j].mul(&f);
                inv[i][j] = inv[i][j].sub(&t);
            }
        }
    }
    Some((det, inv))
}

/// Rank of a matrix with entries in the function field.
pub fn rank(m: &Matrix) -> usize {
    Echelon::new(m.clone()).pivots.len()
}

/// Reduced row echelon form with the pivots used.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Matrix,
    /// `(row, column, original pivot value)`.
    pub pivots: Vec<(usize, usize, Expr)>,
}

impl Echelon {
    pub fn new(mut a: Matrix) -> Echelon {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = best_pivot(&a, col, r) else { continue };
            a.swap(p, r);
            let piv = a[r][col].clone();
            let inv = piv.recip().expect("nonzero pivot");
            for j in col..cols {
                a[r][j] = a[r][j].mul(&inv);
            }
            for i in 0..rows {
                if i == r || a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].clone();
                for j in col..cols {
                    if a[r][j].is_zero() {
                        continue;
                    }
                    let t = a[r][j].mul(&f);
                    a[i][j] = a[i][j].sub(&t);
                }
            }
            pivots.push((r, col, piv));
            r += 1;
        }
        Echelon { rows: a, pivots }
    }
}
