//! Individual structure checks. Every function returns verdicts with a
//! witness when the property holds and a residual entry when it fails.

use rayon::prelude::*;

use super::solve::{known_nonzero, LinearSystem, SolutionSpace};
use super::verdict::{Certificate, CovectorReport, PropertyVerdict, Status, StressEnergy, Witness};
use super::{ClassifyError, Workspace};
use crate::curvature;
use crate::expr::{sum, Expr, Sym};
use crate::geometry::{Metric, ShapeError, Slot, Symmetry, Tensor};
use crate::linalg::{self, Echelon, Matrix};

/// All index tuples of length `r` with entries `1..=n`, lexicographic.
pub(crate) fn index_tuples(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..r {
        out = out.into_iter().flat_map(|p| (1..=n).map(move |i| [p.clone(), vec![i]].concat())).collect();
    }
    out
}

type Terms = Vec<(Expr, usize)>;

/// One equation per index tuple; `f` returns `None` to skip a tuple.
fn build<F>(unknowns: Vec<String>, n: usize, r: usize, f: F) -> LinearSystem
where
    F: Fn(&[usize]) -> Option<(Terms, Expr)> + Sync,
{
    let eqs: Vec<_> = index_tuples(n, r).into_par_iter().filter_map(|i| f(&i).map(|(t, rhs)| (i, t, rhs))).collect();
    let mut sys = LinearSystem::new(unknowns);
    for (i, t, rhs) in eqs {
        sys.push_sparse(i, &t, rhs);
    }
    sys
}

/// `Pi1..Pin, Omega1..` for the given 1-form names.
fn form_names(forms: &[&str], n: usize) -> Vec<String> {
    forms.iter().flat_map(|f| (1..=n).map(move |i| format!("{f}{i}"))).collect()
}

/// Whether `idx` is the stored representative of its orbit under `sym`,
/// which only constrains the leading slots.
fn is_representative(sym: Symmetry, idx: &[usize]) -> bool {
    match sym.representative(idx) {
        Some((rep, _)) => rep == idx,
        None => false,
    }
}

fn shape(t: &Tensor, rank: usize) -> Result<(), ClassifyError> {
    t.expect_covariant(rank).map_err(ClassifyError::from)
}

/// `{Z}_parallel`, `{Z}_codazzi`, `{Z}_cyclic_parallel`, `{Z}_recurrent`
/// for a symmetric (0,2) tensor.
pub fn derivative_class(ws: &Workspace, name: &str) -> Result<Vec<PropertyVerdict>, ClassifyError> {
    let z = ws.tensor(name)?;
    shape(&z, 2)?;
    let dz = ws.nabla(name)?;
    let n = z.dim();
    let codazzi = Tensor::from_fn(n, &[Slot::Co; 3], Symmetry::None, |i| dz.get(i).sub(dz.get(&[i[2], i[1], i[0]])));
    let cyclic = curvature::cyclic_sum(&dz, [1, 2, 3])?;
    Ok(vec![
        PropertyVerdict::zero_check(format!("{name}_parallel"), &dz),
        PropertyVerdict::zero_check(format!("{name}_codazzi"), &codazzi),
        PropertyVerdict::zero_check(format!("{name}_cyclic_parallel"), &cyclic),
        recurrence(ws, name)?,
    ])
}

/// `D·H = 0`.
pub fn semisymmetry_check(ws: &Workspace, d: &str, h: &str) -> Result<PropertyVerdict, ClassifyError> {
    let t = curvature::dot_action(ws.metric(), &*ws.tensor(d)?, &*ws.tensor(h)?)?;
    Ok(PropertyVerdict::zero_check(format!("{d}.{h}"), &t))
}

/// Scalars `c` with `Σ ci ti = 0`, over the function field.
pub fn find_linear_relation(ws: &Workspace, name: &str, tensors: &[Tensor]) -> Result<PropertyVerdict, ClassifyError> {
    let first = tensors.first().ok_or(ClassifyError::Arity(0))?;
    if tensors.len() < 2 {
        return Err(ClassifyError::Arity(tensors.len()));
    }
    for t in tensors {
        if t.slots() != first.slots() || t.dim() != first.dim() {
            return Err(ShapeError::Mismatch { expected: format!("{:?}", first.slots()), found: t.slots().to_vec() }.into());
        }
    }
    if tensors.iter().all(Tensor::is_zero) {
        return Ok(PropertyVerdict::new(name, Status::Vacuous));
    }
    let k = tensors.len();
    let mut sys = LinearSystem::with_count("c", k);
    for idx in first.indices() {
        sys.push_labeled(idx.clone(), tensors.iter().map(|t| t.get(&idx).clone()).collect(), Expr::zero());
    }
    let s = sys.solve().expect("homogeneous systems are consistent");
    if s.basis.is_empty() {
        let (index, residual) = tensors.iter().find_map(Tensor::first_nonzero).expect("some tensor is nonzero");
        let v = PropertyVerdict { certificate: Some(Certificate { index, residual }), ..PropertyVerdict::new(name, Status::Fails) };
        return Ok(v.assuming(ws.metric(), &s.pivots));
    }
    let basis: Vec<Vec<Expr>> = s.basis.iter().map(|b| normalize(b)).collect();
    let constant = basis.iter().any(|b| b.iter().all(Expr::is_constant));
    let v = PropertyVerdict::new(name, Status::Holds).with_witness(Witness::Relation { basis, constant });
    Ok(v.assuming(ws.metric(), &s.pivots))
}

/// Scales `v` so that its first nonzero entry is one.
fn normalize(v: &[Expr]) -> Vec<Expr> {
    match v.iter().find(|e| !e.is_zero()) {
        Some(lead) => {
            let inv = lead.recip().expect("nonzero");
            v.iter().map(|e| e.mul(&inv)).collect()
        }
        None => v.to_vec(),
    }
}

fn matrix(t: &Tensor) -> Matrix {
    let n = t.dim();
    (1..=n).map(|i| (1..=n).map(|j| t.get(&[i, j]).clone()).collect()).collect()
}

struct Rank {
    rank: usize,
    positions: Vec<(usize, usize)>,
    pivots: Vec<Expr>,
}

fn rank_of(m: &Matrix) -> Rank {
    let e = Echelon::new(m.clone());
    Rank {
        rank: e.pivots.len(),
        positions: e.pivots.iter().map(|(r, c, _)| (r + 1, c + 1)).collect(),
        pivots: e.pivots.iter().map(|(_, _, p)| p.clone()).filter(|p| !p.is_constant()).collect(),
    }
}

/// Values of `α` making some 1×1 or 2×2 minor of `A - α g` vanish, where the
/// minor is at most linear in `α`. Zero comes first.
pub fn alpha_candidates(a: &Tensor, g: &Tensor) -> Vec<Expr> {
    let n = a.dim();
    let mut out = vec![Expr::zero()];
    let mut add = |e: Expr| {
        if !out.contains(&e) {
            out.push(e);
        }
    };
    for i in 1..=n {
        for j in i..=n {
            if let Some(q) = a.get(&[i, j]).div(g.get(&[i, j])) {
                add(q);
            }
        }
    }
    for (i, k) in pairs(n) {
        for (j, l) in pairs(n) {
            let (aij, akl, ail, akj) = (a.get(&[i, j]), a.get(&[k, l]), a.get(&[i, l]), a.get(&[k, j]));
            let (gij, gkl, gil, gkj) = (g.get(&[i, j]), g.get(&[k, l]), g.get(&[i, l]), g.get(&[k, j]));
            let quad = gij.mul(gkl).sub(&gil.mul(gkj));
            if !quad.is_zero() {
                continue;
            }
            let lin = sum(vec![aij.mul(gkl), gij.mul(akl), ail.mul(gkj).neg(), gil.mul(akj).neg()]);
            let cst = aij.mul(akl).sub(&ail.mul(akj));
            if let Some(q) = cst.div(&lin) {
                add(q);
            }
        }
    }
    out
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|i| (i + 1..=n).map(move |k| (i, k))).collect()
}

/// `A = β η⊗η` for a symmetric rank-one `A`, with the first nonzero entry of
/// `η` equal to one.
pub fn factor_rank_one(a: &Tensor) -> Option<(Expr, Vec<Expr>)> {
    let n = a.dim();
    let i = (1..=n).find(|&i| !a.get(&[i, i]).is_zero())?;
    let aii = a.get(&[i, i]).clone();
    let eta: Vec<Expr> = (1..=n).map(|j| a.get(&[i, j]).div(&aii).expect("nonzero")).collect();
    let lead = eta.iter().find(|e| !e.is_zero()).expect("eta_i = 1").clone();
    let inv = lead.recip().expect("nonzero");
    Some((aii.mul(&lead).mul(&lead), eta.iter().map(|e| e.mul(&inv)).collect()))
}

/// `a = β η⊗η` checked entrywise, with `β` and `η` defined wherever the
/// metric is.
fn exact_rank_one(m: &Metric, a: &Tensor) -> Option<(Expr, Vec<Expr>)> {
    let (beta, eta) = factor_rank_one(a)?;
    let defined = |e: &Expr| e.den().is_one() || known_nonzero(m, &Expr::from_poly(e.den().clone()));
    if !defined(&beta) || !eta.iter().all(defined) {
        return None;
    }
    let n = a.dim();
    let exact = (1..=n).all(|i| (1..=n).all(|j| m.reduce(a.get(&[i, j]).sub(&beta.mul(&eta[i - 1]).mul(&eta[j - 1]))).is_zero()));
    exact.then_some((beta, eta))
}

/// Moves the assumptions of a verdict whose witness is exact into a note.
fn unconditional(mut v: PropertyVerdict, what: &str) -> PropertyVerdict {
    if v.assumptions.is_empty() {
        return v;
    }
    let a: Vec<String> = v.assumptions.drain(..).map(|e| format!("{e} != 0")).collect();
    v.status = Status::Holds;
    v.with_note(format!("{what} assuming {}", a.join(", ")))
}

/// Minimal rank of `S - α g`: `quasi_einstein_level`, `einstein`,
/// `quasi_einstein` and `ricci_simple`.
pub fn quasi_einstein_level(ws: &Workspace) -> Result<Vec<PropertyVerdict>, ClassifyError> {
    let m = ws.metric();
    let s = ws.tensor("S")?;
    let g = m.g();
    let alpha_sym = Expr::sym(Sym::constant("α"));
    let generic = rank_of(&matrix(&s.sub(&g.scale(&alpha_sym))?)).rank;
    let mut best: Option<(Expr, Rank)> = None;
    for alpha in alpha_candidates(&s, g) {
        let r = rank_of(&matrix(&s.sub(&g.scale(&alpha))?));
        if best.as_ref().is_none_or(|(_, b)| r.rank < b.rank) {
            best = Some((alpha, r));
        }
    }
    let (alpha, r) = best.expect("zero is a candidate");
    let level = r.rank;
    let witness = Witness::Rank { level, alpha: alpha.clone(), generic, pivots: r.positions.clone() };
    let status = |ok: bool| if ok { Status::Holds } else { Status::Fails };
    let lvl = PropertyVerdict::new("quasi_einstein_level", Status::Holds).with_witness(witness).assuming(m, &r.pivots);
    let einstein = PropertyVerdict::new("einstein", status(level == 0))
        .with_witness(Witness::Scalar(alpha.clone()))
        .assuming(m, &r.pivots);
    let exact = level <= 1 && (level == 0 || exact_rank_one(m, &s.sub(&g.scale(&alpha))?).is_some());
    let mut quasi = PropertyVerdict::new("quasi_einstein", status(level <= 1))
        .with_witness(Witness::Scalar(alpha))
        .assuming(m, &r.pivots);
    if exact {
        quasi = unconditional(quasi, "S - alpha g is nonzero");
    }
    let rs = rank_of(&matrix(&s));
    let simple = if rs.rank <= 1 {
        match exact_rank_one(m, &s) {
            Some((beta, eta)) => {
                let v = PropertyVerdict::new("ricci_simple", Status::Holds)
                    .with_witness(Witness::Simple { beta, eta })
                    .assuming(m, &rs.pivots);
                unconditional(v, "beta is nonzero")
            }
            None => {
                let w = match factor_rank_one(&s) {
                    Some((beta, eta)) => Witness::Simple { beta, eta },
                    None => Witness::None,
                };
                PropertyVerdict::new("ricci_simple", Status::Holds).with_witness(w).assuming(m, &rs.pivots)
            }
        }
    } else {
        PropertyVerdict::new("ricci_simple", Status::Fails)
            .with_note(format!("rank of S is {}", rs.rank))
            .assuming(m, &rs.pivots)
    };
    Ok(vec![lvl, einstein, quasi, simple])
}

/// Degree and coefficients of the minimal polynomial of the Ricci operator.
/// `Ein(k)` holds iff the degree is at most `k`.
pub fn ein_level(ws: &Workspace) -> Result<PropertyVerdict, ClassifyError> {
    let m = ws.metric();
    let n = m.dim();
    let op = matrix(&*ws.tensor("Sop")?);
    // op[i][j] = S_i^j; powers act on the right
    let mut powers = vec![linalg::identity(n)];
    for d in 1..=n {
        let next = linalg::mat_mul(&powers[d - 1], &op);
        powers.push(next.into_iter().map(|r| r.into_iter().map(|e| m.reduce(e)).collect()).collect());
        let mut sys = LinearSystem::with_count("lambda", d);
        for i in 0..n {
            for j in 0..n {
                let coeffs = (1..=d).map(|k| powers[d - k][i][j].clone()).collect();
                sys.push_labeled(vec![i + 1, j + 1], coeffs, powers[d][i][j].neg());
            }
        }
        if let Ok(s) = sys.solve() {
            let v = PropertyVerdict::new("ein_level", Status::Holds)
                .with_witness(Witness::MinimalPolynomial { degree: d, lambdas: s.particular.clone() })
                .with_note(match d {
                    1 => "Einstein; the Ricci operator is a multiple of the identity".to_string(),
                    _ => format!("Ein({d}) holds and Ein({}) fails: the Ricci operator has minimal polynomial degree {d}", d - 1),
                });
            return Ok(v.assuming(m, &s.pivots));
        }
    }
    unreachable!("Cayley-Hamilton bounds the degree by the dimension")
}

/// `∇T = Π⊗T`.
pub fn recurrence(ws: &Workspace, name: &str) -> Result<PropertyVerdict, ClassifyError> {
    generalized_recurrence(ws, &format!("{name}_recurrent"), name, &[(name, "Pi")])
}

/// `∇T = Σ_k Π_k ⊗ A_k` for named tensors `A_k` with 1-form names.
pub fn generalized_recurrence(ws: &Workspace, label: &str, target: &str, parts: &[(&str, &str)]) -> Result<PropertyVerdict, ClassifyError> {
    let t = ws.tensor(target)?;
    if t.is_zero() {
        return Ok(PropertyVerdict::new(label, Status::Vacuous));
    }
    let dt = ws.nabla(target)?;
    let tensors = parts.iter().map(|(p, _)| ws.tensor(p)).collect::<Result<Vec<_>, _>>()?;
    let forms: Vec<&str> = parts.iter().map(|(_, f)| *f).collect();
    let (n, r) = (t.dim(), t.rank());
    let sym = t.symmetry();
    let sys = build(form_names(&forms, n), n, r + 1, |idx| {
        let base = &idx[..r];
        if !is_representative(sym, base) {
            return None;
        }
        let e = idx[r];
        let terms = tensors.iter().enumerate().map(|(k, a)| (a.get(base).clone(), k * n + e - 1)).collect();
        Some((terms, dt.get(idx).clone()))
    });
    Ok(PropertyVerdict::from_solution(ws.metric(), label, sys.solve()))
}

/// `∇R = Π⊗R + Ω⊗(S∧S) + Θ⊗(g∧S) + ω⊗(g∧g)`.
pub fn super_generalized_recurrence(ws: &Workspace) -> Result<PropertyVerdict, ClassifyError> {
    let parts = [("R", "Pi"), ("SS", "Omega"), ("gS", "Theta"), ("gg", "omega")];
    generalized_recurrence(ws, "super_generalized_recurrent", "R", &parts)
}

/// Recurrence of the 1-forms of a (0,2) tensor:
/// `(∇_X1 Z)(X2,X) - (∇_X2 Z)(X1,X) = Π(X1) Z(X2,X) - Π(X2) Z(X1,X)`.
pub fn one_forms_recurrence(ws: &Workspace, label: &str, name: &str) -> Result<PropertyVerdict, ClassifyError> {
    let z = ws.tensor(name)?;
    shape(&z, 2)?;
    if z.is_zero() {
        return Ok(PropertyVerdict::new(label, Status::Vacuous));
    }
    let dz = ws.nabla(name)?;
    let n = z.dim();
    let sys = build(form_names(&["Pi"], n), n, 3, |i| {
        let (x1, x2, x) = (i[0], i[1], i[2]);
        if x1 >= x2 {
            return None;
        }
        let lhs = dz.get(&[x2, x, x1]).sub(dz.get(&[x1, x, x2]));
        Some((vec![(z.get(&[x2, x]).clone(), x1 - 1), (z.get(&[x1, x]).neg(), x2 - 1)], lhs))
    });
    Ok(PropertyVerdict::from_solution(ws.metric(), label, sys.solve()))
}

/// Recurrence of the 2-forms of a (0,4) tensor: the cyclic sum over
/// `(X1,X2,X3)` of `(∇_X1 D)(X2,X3,X,Y)` equals that of `Π(X1) D(X2,X3,X,Y)`.
pub fn two_forms_recurrence(ws: &Workspace, label: &str, name: &str) -> Result<PropertyVerdict, ClassifyError> {
    let d = ws.tensor(name)?;
    shape(&d, 4)?;
    if d.is_zero() {
        return Ok(PropertyVerdict::new(label, Status::Vacuous));
    }
    let dd = ws.nabla(name)?;
    let n = d.dim();
    let sys = build(form_names(&["Pi"], n), n, 5, |i| {
        let (x1, x2, x3, x, y) = (i[0], i[1], i[2], i[3], i[4]);
        // the condition is totally antisymmetric in (X1,X2,X3) and in (X,Y)
        if !(x1 < x2 && x2 < x3 && x < y) {
            return None;
        }
        let lhs = sum(vec![dd.get(&[x2, x3, x, y, x1]).clone(), dd.get(&[x3, x1, x, y, x2]).clone(), dd.get(&[x1, x2, x, y, x3]).clone()]);
        let terms = vec![
            (d.get(&[x2, x3, x, y]).clone(), x1 - 1),
            (d.get(&[x3, x1, x, y]).clone(), x2 - 1),
            (d.get(&[x1, x2, x, y]).clone(), x3 - 1),
        ];
        Some((terms, lhs))
    });
    Ok(PropertyVerdict::from_solution(ws.metric(), label, sys.solve()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeakKind {
    /// `∇_X Z(X1..Xk) = Π(X) Z(X1..Xk) + Σ_s A_s(Xs) Z(..X..)`.
    Plain,
    /// The cyclic variant for a (0,2) tensor.
    Cyclic,
}

fn weak_forms(rank: usize) -> &'static [&'static str] {
    if rank == 2 {
        &["Pi", "Omega", "Theta"]
    } else {
        &["Pi", "Omega", "OmegaBar", "Theta", "ThetaBar"]
    }
}

fn weak_system(ws: &Workspace, name: &str, kind: WeakKind) -> Result<Option<LinearSystem>, ClassifyError> {
    let z = ws.tensor(name)?;
    let r = z.rank();
    if !z.is_covariant() || !(r == 2 || r == 4) || (kind == WeakKind::Cyclic && r != 2) {
        return Err(ShapeError::Mismatch { expected: "a (0,2) or (0,4) tensor".into(), found: z.slots().to_vec() }.into());
    }
    if z.is_zero() {
        return Ok(None);
    }
    let dz = ws.nabla(name)?;
    let n = z.dim();
    Ok(Some(build(form_names(weak_forms(r), n), n, r + 1, |i| {
        let (base, x) = (&i[..r], i[r]);
        let lhs = match kind {
            WeakKind::Plain => dz.get(i).clone(),
            WeakKind::Cyclic => {
                let (a, b) = (base[0], base[1]);
                sum(vec![dz.get(&[a, b, x]).clone(), dz.get(&[x, b, a]).clone(), dz.get(&[a, x, b]).clone()])
            }
        };
        let mut terms = vec![(z.get(base).clone(), x - 1)];
        let mut src = base.to_vec();
        for s in 0..r {
            src[s] = x;
            terms.push((z.get(&src).clone(), (s + 1) * n + base[s] - 1));
            src[s] = base[s];
        }
        Some((terms, lhs))
    })))
}

/// Weak symmetry of a (0,2) or (0,4) tensor, and the Chaki form
/// `(2A, A, A[, A, A])` of its 1-forms.
pub fn solve_weak_symmetry(ws: &Workspace, label: &str, chaki: &str, name: &str, kind: WeakKind) -> Result<[PropertyVerdict; 2], ClassifyError> {
    let Some(mut sys) = weak_system(ws, name, kind)? else {
        return Ok([PropertyVerdict::new(label, Status::Vacuous), PropertyVerdict::new(chaki, Status::Vacuous)]);
    };
    let m = ws.metric();
    let weak = PropertyVerdict::from_solution(m, label, sys.solve());
    let n = m.dim();
    let forms = sys.unknowns().len() / n;
    for e in 0..n {
        sys.push_sparse(vec![0, e + 1], &[(Expr::one(), e), (Expr::int(-2), n + e)], Expr::zero());
        for s in 2..forms {
            sys.push_sparse(vec![s, e + 1], &[(Expr::one(), s * n + e), (Expr::int(-1), n + e)], Expr::zero());
        }
    }
    let ch = PropertyVerdict::from_solution(m, chaki, sys.solve());
    Ok([weak, ch])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompatibilityMode {
    /// Symmetric `E`, `n(n+1)/2` unknowns.
    Symmetric,
    /// Arbitrary `E`, `n²` unknowns.
    General,
}

/// `D` read with its slots reversed, `D̃(a,b,c,d) = D(d,c,b,a)`, then raised
/// in the first slot. The reversal is the identity on tensors with the
/// symmetries of `R`; for `P` it is the reading under which the Ricci tensor
/// of a pure radiation metric is compatible.
fn compat_operator(m: &Metric, d: &Tensor) -> Result<Tensor, ShapeError> {
    m.raise(&d.permute(&[3, 2, 1, 0]), 1)
}

/// `Σ_cyc D̃(𝓔X1, X, X2, X3)` with `(𝓔X1)^m = g^{mk} E(X1, ∂k)`.
fn compat_terms(dr: &Tensor, i: &[usize], n: usize, mut unknown: impl FnMut(usize, usize) -> usize) -> Terms {
    let (x1, x, x2, x3) = (i[0], i[1], i[2], i[3]);
    let mut terms = Vec::new();
    for (a, b, c) in [(x1, x2, x3), (x2, x3, x1), (x3, x1, x2)] {
        for k in 1..=n {
            let v = dr.get(&[k, x, b, c]);
            if !v.is_zero() {
                terms.push((v.clone(), unknown(a, k)));
            }
        }
    }
    terms
}

/// Solution space of `D`-compatible (0,2) tensors.
pub fn solve_compatibility(ws: &Workspace, name: &str, mode: CompatibilityMode) -> Result<PropertyVerdict, ClassifyError> {
    let d = ws.tensor(name)?;
    shape(&d, 4)?;
    let label = format!("{name}_compatible_space");
    if d.is_zero() {
        return Ok(PropertyVerdict::new(label, Status::Vacuous));
    }
    let m = ws.metric();
    let n = d.dim();
    let dr = compat_operator(m, &d)?;
    let (names, index): (Vec<String>, Box<dyn Fn(usize, usize) -> usize + Sync>) = match mode {
        CompatibilityMode::General => (
            (1..=n).flat_map(|a| (1..=n).map(move |b| format!("E{a}{b}"))).collect(),
            Box::new(move |a, b| (a - 1) * n + b - 1),
        ),
        CompatibilityMode::Symmetric => {
            let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|a| (a..=n).map(move |b| (a, b))).collect();
            let names = pairs.iter().map(|(a, b)| format!("E{a}{b}")).collect();
            (names, Box::new(move |a, b| pairs.iter().position(|p| *p == (a.min(b), a.max(b))).expect("pair")))
        }
    };
    let sys = build(names, n, 4, |i| Some((compat_terms(&dr, i, n, &index), Expr::zero())));
    let s = sys.solve().expect("homogeneous systems are consistent");
    let status = if s.dimension() > 0 { Status::Holds } else { Status::Fails };
    let pivots = s.pivots.clone();
    Ok(PropertyVerdict::new(label, status).with_witness(Witness::Solution(s)).assuming(m, &pivots))
}

/// Whether the symmetric tensor `e` is `d`-compatible, by direct substitution.
pub fn is_compatible(ws: &Workspace, e: &str, d: &str) -> Result<PropertyVerdict, ClassifyError> {
    let (et, dt) = (ws.tensor(e)?, ws.tensor(d)?);
    shape(&et, 2)?;
    shape(&dt, 4)?;
    let label = format!("{e}_{d}_compatible");
    if dt.is_zero() {
        return Ok(PropertyVerdict::new(label, Status::Vacuous));
    }
    let m = ws.metric();
    let n = m.dim();
    let dr = compat_operator(m, &dt)?;
    let res = Tensor::from_fn(n, &[Slot::Co; 4], Symmetry::None, |i| {
        let terms = compat_terms(&dr, i, n, |a, k| (a - 1) * n + k - 1);
        m.reduce(sum(terms.into_iter().map(|(v, u)| v.mul(et.get(&[u / n + 1, u % n + 1]))).collect()))
    });
    Ok(PropertyVerdict::zero_check(label, &res))
}

/// Nonzero 1-forms `Θ` with `Θ(X1)D(X2,X3,X4,X5) + Θ(X2)D(X3,X1,X4,X5) + Θ(X3)D(X1,X2,X4,X5) = 0`.
pub fn solve_venzi(ws: &Workspace, name: &str) -> Result<PropertyVerdict, ClassifyError> {
    let d = ws.tensor(name)?;
    shape(&d, 4)?;
    let label = format!("venzi_{name}");
    if d.is_zero() {
        return Ok(PropertyVerdict::new(label, Status::Vacuous));
    }
    let n = d.dim();
    let sys = build(form_names(&["Theta"], n), n, 5, |i| {
        let (x1, x2, x3, x4, x5) = (i[0], i[1], i[2], i[3], i[4]);
        let terms = vec![
            (d.get(&[x2, x3, x4, x5]).clone(), x1 - 1),
            (d.get(&[x3, x1, x4, x5]).clone(), x2 - 1),
            (d.get(&[x1, x2, x4, x5]).clone(), x3 - 1),
        ];
        Some((terms, Expr::zero()))
    });
    let s = sys.solve().expect("homogeneous systems are consistent");
    let m = ws.metric();
    if s.dimension() == 0 {
        let (index, residual) = d.first_nonzero().expect("nonzero tensor");
        let v = PropertyVerdict { certificate: Some(Certificate { index, residual }), ..PropertyVerdict::new(label, Status::Fails) };
        return Ok(v.with_note("only the zero 1-form solves the system").assuming(m, &s.pivots));
    }
    let pivots = s.pivots.clone();
    let s = SolutionSpace { basis: s.basis.iter().map(|b| normalize(b)).collect(), ..s };
    // A basis form defined everywhere is a witness by itself; the pivots only
    // bound the dimension of the space.
    let defined = s.basis.iter().any(|b| b.iter().all(|e| e.den().is_one() || known_nonzero(m, &Expr::from_poly(e.den().clone()))));
    let v = PropertyVerdict::new(label, Status::Holds).with_witness(Witness::Solution(s));
    if !defined {
        return Ok(v.assuming(m, &pivots));
    }
    let bound = PropertyVerdict::new("", Status::Holds).assuming(m, &pivots).assumptions;
    if bound.is_empty() {
        return Ok(v);
    }
    let a: Vec<String> = bound.iter().map(|e| format!("{e} != 0")).collect();
    Ok(v.with_note(format!("dimension exact assuming {}", a.join(", "))))
}

fn norm(m: &Metric, eta: &[Expr]) -> Expr {
    let inv = m.inverse();
    let n = m.dim();
    let mut terms = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if !eta[i - 1].is_zero() && !eta[j - 1].is_zero() {
                terms.push(inv.get(&[i, j]).mul(&eta[i - 1]).mul(&eta[j - 1]));
            }
        }
    }
    m.reduce(sum(terms))
}

/// Pure radiation, perfect fluid or the general frame decomposition of `T`.
pub fn classify_stress_energy(ws: &Workspace) -> Result<PropertyVerdict, ClassifyError> {
    let m = ws.metric();
    let t = ws.tensor("T")?;
    let g = m.g();
    let n = m.dim();
    if t.is_zero() {
        return Ok(PropertyVerdict::new("stress_energy", Status::Vacuous).with_witness(Witness::StressEnergy(StressEnergy::Vacuum)));
    }
    for p in alpha_candidates(&t, g) {
        let rest = t.sub(&g.scale(&p))?;
        let r = rank_of(&matrix(&rest));
        if r.rank != 1 {
            continue;
        }
        let (sigma, eta) = factor_rank_one(&rest).expect("symmetric rank one");
        let nrm = norm(m, &eta);
        let se = if p.is_zero() && nrm.is_zero() {
            StressEnergy::PureRadiation { rho: sigma, eta, norm: nrm }
        } else {
            StressEnergy::PerfectFluid { pressure: p, sigma, eta, norm: nrm }
        };
        let exact = exact_rank_one(m, &rest).is_some();
        let v = PropertyVerdict::new("stress_energy", Status::Holds).with_witness(Witness::StressEnergy(se)).assuming(m, &r.pivots);
        return Ok(if exact { unconditional(v, "the rank-one part is nonzero") } else { v });
    }
    let alpha = if n >= 2 { t.get(&[1, 2]).div(g.get(&[1, 2])) } else { None }.unwrap_or_else(Expr::zero);
    let rest = t.sub(&g.scale(&alpha))?;
    let frame = [(1, 1), (3, 3), (4, 4), (1, 3), (3, 4)];
    let e = |i: usize, j: usize| if i <= n && j <= n { rest.get(&[i, j]).clone() } else { Expr::zero() };
    let remainder = rest
        .nonzero()
        .into_iter()
        .filter(|(i, _)| i[0] <= i[1] && !frame.contains(&(i[0], i[1])))
        .collect::<Vec<_>>();
    let se = StressEnergy::General { alpha, beta: [e(1, 1), e(3, 3), e(4, 4)], sigma: [e(1, 3), e(3, 4)], remainder };
    Ok(PropertyVerdict::new("stress_energy", Status::Holds).with_witness(Witness::StressEnergy(se)))
}

/// Coordinate covectors `dx^k` and the metric duals of `∂_k`.
pub fn default_covectors(m: &Metric) -> Vec<(String, Vec<Expr>)> {
    let n = m.dim();
    let mut out = Vec::new();
    for k in 1..=n {
        let name = m.chart().coords()[k - 1].name.clone();
        out.push((format!("d{name}"), (1..=n).map(|i| if i == k { Expr::one() } else { Expr::zero() }).collect()));
    }
    for k in 1..=n {
        let name = m.chart().coords()[k - 1].name.clone();
        out.push((format!("g(d/d{name})"), (1..=n).map(|i| m.g().get(&[i, k]).clone()).collect()));
    }
    out
}

/// Some candidate covector is null and parallel.
pub fn constant_null_covector_check(ws: &Workspace, candidates: &[(String, Vec<Expr>)]) -> Result<PropertyVerdict, ClassifyError> {
    let m = ws.metric();
    let n = m.dim();
    let mut reports = Vec::new();
    for (label, xi) in candidates {
        if xi.len() != n {
            return Err(ShapeError::Dimension(n, xi.len()).into());
        }
        let t = Tensor::from_fn(n, &[Slot::Co], Symmetry::None, |i| m.reduce(xi[i[0] - 1].clone()));
        let nabla = m.covariant_derivative(&t).nonzero();
        reports.push(CovectorReport { label: label.clone(), components: xi.clone(), norm: norm(m, xi), nabla });
    }
    let found = reports.iter().any(|r| r.is_null() && r.is_parallel() && r.components.iter().any(|e| !e.is_zero()));
    let certificate = if found {
        None
    } else {
        reports.iter().find(|r| r.is_null()).and_then(|r| r.nabla.first()).map(|(i, e)| Certificate { index: i.clone(), residual: e.clone() })
    };
    let mut v = PropertyVerdict::new("generalized_pp_wave", if found { Status::Holds } else { Status::Fails });
    v.certificate = certificate;
    Ok(v.with_witness(Witness::Covectors(reports)))
}
