//! Named checks grouped by acceptance criterion. Each check is an [`Item`];
//! the integration tests assert on them and the acceptance run prints them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use curvlab::catalog::{builtin, MetricSpec, Specialization};
use curvlab::classify::{
    classify, compare, solve_compatibility, CompatibilityMode, PropertyVerdict, SolutionSpace, Status, StressEnergy, Witness, Workspace,
};
use curvlab::curvature::{cyclic_sum, dot_action, kulkarni_nomizu, q_operator, ricci_power};
use curvlab::expr::{parse_expr, Expr, Sym};
use curvlab::geometry::{Metric, Tensor};
use curvlab::report::{check_identity, parse_identity};

use super::{ex, metric, prm_tables, gprm_tables, check_table, GPRM_KAPPA, PRM_R, PRM_S};

/// Relative tolerance of the numeric cross-checks.
pub const REL_TOL: f64 = 1e-6;
/// Random points per metric in the numeric cross-check.
pub const POINTS: usize = 10;

pub struct Item {
    pub name: String,
    pub result: Result<(), String>,
}

impl Item {
    pub fn ok(&self) -> bool {
        self.result.is_ok()
    }
}

fn item(name: impl Into<String>, result: Result<(), String>) -> Item {
    Item { name: name.into(), result }
}

fn expect(name: impl Into<String>, cond: bool, detail: impl FnOnce() -> String) -> Item {
    item(name, if cond { Ok(()) } else { Err(detail()) })
}

/// Panics with every failing item whose name passes `keep`.
pub fn assert_items(items: &[Item], keep: impl Fn(&str) -> bool) {
    let bad: Vec<String> =
        items.iter().filter(|i| keep(&i.name)).filter_map(|i| i.result.as_ref().err().map(|e| format!("{}: {e}", i.name))).collect();
    assert!(bad.is_empty(), "failing checks:\n{}", bad.join("\n"));
}

pub fn verdict(m: &Metric, name: &str) -> PropertyVerdict {
    let r = classify(m, "test", Some(&[name])).unwrap_or_else(|e| panic!("{name}: {e}"));
    r.get(name).unwrap_or_else(|| panic!("{name} missing")).clone()
}

fn status_is(m: &Metric, name: &str, want: bool) -> Item {
    let v = verdict(m, name);
    let label = format!("{name} {}", if want { "holds" } else { "fails" });
    expect(label, v.status.holds() == want, || format!("got {}", v.summary()))
}

fn solution(v: &PropertyVerdict) -> Result<&SolutionSpace, String> {
    v.solution().ok_or_else(|| format!("{} has no solution space: {}", v.name, v.summary()))
}

fn specialized(name: &str, rules: &[(&str, &str)], constants: &[&str], functions: &[(&str, &[&str])]) -> (MetricSpec, Metric) {
    let mut s = Specialization::new();
    for c in constants {
        s = s.constant(c);
    }
    for (f, d) in functions {
        s = s.function(f, d);
    }
    for (t, v) in rules {
        s = s.rule(t, v);
    }
    let spec = builtin(name).unwrap().specialize(&s).unwrap_or_else(|e| panic!("{name} {rules:?}: {e}"));
    let m = spec.metric().unwrap();
    (spec, m)
}

fn identity(m: &Metric, id: &str) -> Result<bool, String> {
    let ws = Workspace::new(m);
    let parsed = parse_identity(id).map_err(|e| e.to_string())?;
    check_identity(&ws, &parsed).map(|o| o.holds).map_err(|e| e.to_string())
}

fn e1() -> Vec<Expr> {
    vec![Expr::one(), Expr::zero(), Expr::zero(), Expr::zero()]
}

fn free(name: &str) -> Expr {
    Expr::sym(Sym::constant(name))
}

pub fn prm_tables_items() -> Vec<Item> {
    let m = metric("prm");
    let mut out: Vec<Item> = prm_tables(&m).iter().map(|t| item(format!("prm table {}", t.label), t.check(&m))).collect();
    out.push(expect("prm kappa = 0", m.scalar().is_zero(), || m.scalar().to_string()));
    out
}

pub fn gprm_tables_items() -> Vec<Item> {
    let m = metric("gprm");
    let mut out: Vec<Item> = gprm_tables(&m).iter().map(|t| item(format!("gprm table {}", t.label), t.check(&m))).collect();
    out.push(expect("gprm kappa", m.scalar() == &ex(&m, GPRM_KAPPA), || m.scalar().to_string()));
    out
}

/// The paper's compatible matrices, with every `a(i,j)` a free constant.
fn compatible_matrix(m: &Metric, rows: [[&str; 4]; 4]) -> Vec<Expr> {
    let mut ctx = m.chart().context().clone();
    for i in 1..=4 {
        for j in 1..=4 {
            ctx.add_constant(&format!("a{i}{j}")).unwrap();
        }
    }
    rows.iter().flat_map(|r| r.iter().map(|s| parse_expr(&ctx, s).unwrap()).collect::<Vec<_>>()).collect()
}

/// The Ricci tensor as a point of a symmetric compatibility space.
fn symmetric_point(s: &SolutionSpace, t: &Tensor) -> Vec<Expr> {
    s.unknowns
        .iter()
        .map(|u| {
            let d: Vec<usize> = u[1..].chars().map(|c| c.to_digit(10).unwrap() as usize).collect();
            t.get(&d).clone()
        })
        .collect()
}

pub fn prm_checklist() -> Vec<Item> {
    let m = metric("prm");
    let e = |s: &str| ex(&m, s);
    let mut out = Vec::new();
    for (n, want) in [
        ("S_codazzi", false),
        ("S_cyclic_parallel", false),
        ("scalar_zero", true),
        ("W_equals_R", true),
        ("K_equals_C", true),
        ("R_parallel", false),
        ("C_parallel", false),
        ("semisymmetric", true),
        ("R.S", true),
        ("R.C", true),
        ("R.P", true),
        ("C.R", true),
        ("C.S", true),
        ("C.C", true),
        ("C.P", true),
        ("P.S", true),
        ("Q(S,R)", true),
        ("Q(S,C)", true),
        ("P.R", true),
        ("P.C", true),
        ("P.Rop", false),
        ("P.Sop", true),
        ("einstein", false),
        ("S2_zero", true),
        ("SS_zero", true),
        ("P.P", false),
        ("R_recurrent", false),
        ("S_recurrent", false),
        ("C_recurrent", false),
        ("S_R_compatible", true),
        ("S_C_compatible", true),
        ("S_P_compatible", true),
        ("div_R_zero", false),
        ("div_C_zero", false),
        ("div_P_zero", false),
    ] {
        out.push(status_is(&m, n, want));
    }
    for d in ["R", "C", "P", "W", "K"] {
        out.push(status_is(&m, &format!("weakly_symmetric_{d}"), false));
    }
    for d in ["R", "C", "P"] {
        let v = verdict(&m, &format!("venzi_{d}"));
        let r = solution(&v).and_then(|s| {
            if v.status == Status::Holds && s.dimension() == 1 && s.spans(&e1()) {
                Ok(())
            } else {
                Err(v.summary())
            }
        });
        out.push(item(format!("venzi_{d} span {{1,0,0,0}}"), r));
    }
    out.push(expect("R.R == 0", identity(&m, "R.R == 0") == Ok(true), || "identity fails".into()));
    let ks = kulkarni_nomizu(m.ricci(), m.ricci()).unwrap();
    out.push(expect("S wedge S = 0", ks.is_zero(), || "nonzero".into()));

    let v = verdict(&m, "ricci_simple");
    let r = match &v.witness {
        Witness::Simple { beta, eta } => {
            let ok_beta = *beta == e("-p^2*x*(w_33+w_44)/2");
            let ok_eta = *eta == e1();
            let null = m.inverse().get(&[1, 1]).is_zero();
            if v.status == Status::Holds && ok_beta && ok_eta && null {
                Ok(())
            } else {
                Err(format!("{} beta = {beta}", v.summary()))
            }
        }
        _ => Err(v.summary()),
    };
    out.push(item("ricci_simple with beta and null eta", r));

    out.push(expect("P.P + 1/3*Q(S,P) == 0", identity(&m, "P.P + 1/3*Q(S,P) == 0") == Ok(true), || "identity fails".into()));
    out.push(status_is(&m, "P.P~Q(S,P)", true));

    let v = verdict(&m, "ricci_1forms_recurrent");
    let pi = vec![Expr::one(), Expr::zero(), e("(w_333+w_344)/(w_33+w_44)"), e("(w_334+w_444)/(w_33+w_44)")];
    let r = solution(&v).and_then(|s| if s.contains(&pi) { Ok(()) } else { Err(v.summary()) });
    out.push(item("Ricci 1-forms recurrent for the displayed form", r));

    let v = verdict(&m, "conformal_2forms_recurrent");
    let den = "(4*w_34^2+(w_44-w_33)^2)";
    let pi = vec![
        Expr::one(),
        Expr::zero(),
        e(&format!("(2*w_34*(w_334+w_444)-(w_44-w_33)*(w_333+w_344))/{den}")),
        e(&format!("(2*w_34*(w_333+w_344)+(w_44-w_33)*(w_334+w_444))/{den}")),
    ];
    let r = solution(&v).and_then(|s| if s.contains(&pi) { Ok(()) } else { Err(v.summary()) });
    out.push(item("conformal 2-forms recurrent for the displayed form", r));

    let ws = Workspace::new(&m);
    let mats: [(&str, [[&str; 4]; 4]); 3] = [
        ("R", [
            ["a11", "a12", "a13", "a14"],
            ["a21", "0", "0", "0"],
            ["a31", "0", "a33", "a34"],
            ["a41", "0", "a43", "a33+w_44*a34/w_34-w_33*a43/w_34"],
        ]),
        ("C", [
            ["a11", "a12", "a13", "a14"],
            ["a21", "0", "0", "0"],
            ["a31", "0", "a33", "a34"],
            ["a41", "0", "-2*w_34*a33/(w_44-w_33)-a34+2*w_34*a44/(w_44-w_33)", "a44"],
        ]),
        ("P", [
            ["a11", "a12", "a13", "a14"],
            ["a21", "0", "0", "0"],
            ["a31", "0", "-(2*w_44-w_33)*a34/(3*w_34)-(w_44-2*w_33)*a43/(3*w_34)+a44", "a34"],
            ["a41", "0", "a43", "a44"],
        ]),
    ];
    for (d, rows) in mats {
        let v = solve_compatibility(&ws, d, CompatibilityMode::General).unwrap();
        let point = compatible_matrix(&m, rows);
        let r = solution(&v).and_then(|s| if s.contains(&point) { Ok(()) } else { Err(v.summary()) });
        out.push(item(format!("{d}-compatible space contains the displayed matrix"), r));
        let v = verdict(&m, &format!("{d}_compatible_space"));
        let r = solution(&v).and_then(|s| if s.contains(&symmetric_point(s, m.ricci())) { Ok(()) } else { Err(v.summary()) });
        out.push(item(format!("{d}-compatible space contains S"), r));
    }

    let (p1, o1) = (free("Pi1"), free("Omega1"));
    let v = verdict(&m, "weakly_ricci_symmetric");
    let th1 = e("(x^2*w_144+x^2*w_133-2*p^2*r*w_33-2*p^2*r*w_44)/((w_33+w_44)*x^2)").sub(&p1).sub(&o1);
    let point = vec![
        p1.clone(),
        Expr::zero(),
        e("(w_333*x+w_344*x-w_33-w_44)/((w_33+w_44)*x)"),
        e("(w_334+w_444)/(w_33+w_44)"),
        o1.clone(),
        Expr::zero(),
        e("-1/x"),
        Expr::zero(),
        th1,
        Expr::zero(),
        e("-1/x"),
        Expr::zero(),
    ];
    let r = solution(&v).and_then(|s| if s.contains(&point) { Ok(()) } else { Err(v.summary()) });
    out.push(item("weakly Ricci symmetric witness is a member", r));

    let v = verdict(&m, "weakly_cyclic_ricci_symmetric");
    let q3 = e("((w_333+w_344)*x-3*w_33-3*w_44)/((w_33+w_44)*x)");
    let q4 = e("(w_334+w_444)/(w_33+w_44)");
    let th1 = e("3*(x^2*(w_144+w_133)-2*p^2*r*(w_33+w_44))/((w_33+w_44)*x^2)").sub(&p1).sub(&o1);
    let z = Expr::zero();
    let point = vec![p1, z.clone(), q3.clone(), q4.clone(), o1, z.clone(), q3.clone(), q4.clone(), th1, z, q3, q4];
    let r = solution(&v).and_then(|s| if s.contains(&point) { Ok(()) } else { Err(v.summary()) });
    out.push(item("weakly cyclic Ricci symmetric witness is a member", r));
    out
}

pub const CYCLIC_PARALLEL_ITEM: &str = "T cyclic parallel when w_33+w_44 is independent of u, x, y";

pub fn prm_stress_energy() -> Vec<Item> {
    let m = metric("prm");
    let e = |s: &str| ex(&m, s);
    let mut out = Vec::new();
    let v = verdict(&m, "R.T");
    out.push(expect("R.T = 0 unconditionally", v.status == Status::Holds && v.assumptions.is_empty(), || v.summary()));

    let t = curvlab::curvature::energy_momentum(&m).unwrap();
    let dt = m.covariant_derivative(&t);
    let cyc = cyclic_sum(&dt, [1, 2, 3]).unwrap();
    for (i, want) in [
        ([1, 1, 1], "3*c^4*p^2*(-x^2*w_144-x^2*w_133+2*p^2*r*w_33+2*p^2*r*w_44)/(16*pi*G*x)"),
        ([1, 1, 3], "c^4*p^2*(-w_333*x-w_344*x+3*w_33+3*w_44)/(16*pi*G)"),
        ([1, 1, 4], "-c^4*p^2*(w_334+w_444)*x/(16*pi*G)"),
    ] {
        let got = cyc.get(&i);
        out.push(expect(format!("cyclic sum {i:?}"), got == &e(want), || got.to_string()));
    }
    for (a, b, want) in [
        ([1, 3, 1], [1, 1, 3], "c^4*p^2*(w_333+w_344)*x/(16*pi*G)"),
        ([1, 4, 1], [1, 1, 4], "c^4*p^2*(w_334+w_444)*x/(16*pi*G)"),
    ] {
        let got = m.reduce(dt.get(&a).sub(dt.get(&b)));
        out.push(expect(format!("Codazzi difference {a:?} - {b:?}"), got == e(want), || got.to_string()));
    }

    let xy = [("w_333", "-w_344"), ("w_334", "-w_444")];
    let (_, mc) = specialized("prm", &xy, &[], &[]);
    out.push(status_is(&mc, "T_codazzi", true).renamed("T Codazzi when w_33+w_44 is independent of x, y"));
    let uxy = [xy[0], xy[1], ("w_133", "-w_144")];
    let (_, mp) = specialized("prm", &uxy, &[], &[]);
    out.push(status_is(&mp, "T_cyclic_parallel", true).renamed(CYCLIC_PARALLEL_ITEM));
    let (_, mz) = specialized("prm", &[("w_33", "-w_44")], &[], &[]);
    out.push(status_is(&mz, "T_parallel", true).renamed("T parallel when w_33+w_44 = 0"));
    out.push(status_is(&m, "T_parallel", false));
    out
}

impl Item {
    fn renamed(mut self, name: &str) -> Item {
        self.name = name.into();
        self
    }
}

pub const S4_DISPLAYED_ITEM: &str = "S^4 relation as displayed";

/// Coefficients `(c0, c1, c2, c3)` of the displayed quartic relation
/// `S^4 = c0 g + c1 S + c2 S^2 + c3 S^3`.
fn s4_coefficients(m: &Metric) -> [Expr; 4] {
    let e = |s: &str| ex(m, s);
    [
        e("(-2*a*f+b^2+b)^2/(16*f^8*x^7)*(b*(b+2)*f^3*((f_33+f_44)*x-b*f_3)+f^2*x*((f_33+f_44)^2*x^2-2*b*(b+1)*(f_3^2+f_4^2))\
           -2*(f_3^2+f_4^2)*(f_33+f_44)*f*x^3+(f_3^2+f_4^2)^2*x^3)"),
        e("-(-2*a*f+b^2+b)/(8*f^7*x^6)*(f^4*(b^2*(b+1)*(b+2)-4*a*(f_33+f_44)*x^2)\
           +2*f^3*x*(x*(2*a*f_4^2+b*(2*b+3)*(f_33+f_44))+2*a*f_3^2*x-(b+2)*b^2*f_3)-2*a*b*(b+2)*f^5\
           +2*f^2*x^2*((f_33+f_44)^2*x^2-3*b*(b+1)*(f_3^2+f_4^2))-4*(f_3^2+f_4^2)*(f_33+f_44)*f*x^4+2*(f_3^2+f_4^2)^2*x^4)"),
        e("1/(4*f^6*x^4)*(4*a^2*f^6+f^4*(b^2*(b+1)*(3*b+5)-8*a*(f_33+f_44)*x^2)\
           +f^3*x*(x*(8*a*f_4^2+b*(5*b+6)*(f_33+f_44))+8*a*f_3^2*x-(b+2)*b^2*f_3)-4*a*b*(2*b+3)*f^5\
           +f^2*x^2*((f_33+f_44)^2*x^2-6*b*(b+1)*(f_3^2+f_4^2))-2*(f_3^2+f_4^2)*(f_33+f_44)*f*x^4+(f_3^2+f_4^2)^2*x^4)"),
        e("1/(2*f^3*x^2)*(f^2*(4*a*f-b*(3*b+4))+2*(f_3^2+f_4^2-f*(f_33+f_44))*x^2)"),
    ]
}

pub fn gprm_quasi_einstein() -> Vec<Item> {
    let m = metric("gprm");
    let mut out = Vec::new();
    let v = verdict(&m, "quasi_einstein_level");
    let alpha = ex(&m, "(b+b^2-2*a*f)/(2*f*x^2)");
    let r = match &v.witness {
        Witness::Rank { level: 3, alpha: a, .. } if *a == alpha => Ok(()),
        _ => Err(v.summary()),
    };
    out.push(item("rank(S - alpha g) = 3", r));

    let s = m.ricci();
    let powers: Vec<Tensor> = (1..=4).map(|k| ricci_power(&m, s, k).unwrap()).collect();
    let c = s4_coefficients(&m);
    let basis = [m.g(), &powers[0], &powers[1], &powers[2]];
    let combo = |sign: i64| {
        Tensor::from_fn(4, m.g().slots(), curvlab::geometry::Symmetry::Symmetric, |i| {
            let rhs: Vec<Expr> = (0..4).map(|k| c[k].mul(basis[k].get(i))).collect();
            m.reduce(powers[3].get(i).sub(&curvlab::expr::sum(rhs).scale(sign, 1)))
        })
    };
    let shown = combo(1);
    out.push(expect(S4_DISPLAYED_ITEM, shown.is_zero(), || {
        let (i, v) = shown.first_nonzero().unwrap();
        format!("residual {i:?} = {v}")
    }));
    let moved = combo(-1);
    out.push(expect("S^4 + c3 S^3 + c2 S^2 + c1 S + c0 g = 0", moved.is_zero(), || {
        let (i, v) = moved.first_nonzero().unwrap();
        format!("residual {i:?} = {v}")
    }));

    let v = verdict(&m, "ein_level");
    let r = match &v.witness {
        Witness::MinimalPolynomial { degree: 4, .. } if v.notes.iter().any(|n| n.contains("Ein(4) holds") && n.contains("Ein(3) fails")) => Ok(()),
        _ => Err(format!("{} {:?}", v.summary(), v.notes)),
    };
    out.push(item("ein_level 4 with the Ein(3) discrepancy noted", r));

    let v = verdict(&m, "generalized_pp_wave");
    let r = match &v.witness {
        Witness::Covectors(cs) => {
            let du = cs.iter().find(|c| c.label == "du").expect("du candidate");
            let at = |i: [usize; 2]| du.nabla.iter().find(|(j, _)| j[..] == i[..]).map(|(_, v)| v.clone()).unwrap_or_else(Expr::zero);
            let want = [([1, 1], ex(&m, "a*r/x^2")), ([1, 3], ex(&m, "b/(2*x)")), ([3, 1], ex(&m, "b/(2*x)"))];
            if du.is_null() && want.iter().all(|(i, w)| at(*i) == *w) && du.nabla.len() == 3 {
                Ok(())
            } else {
                Err(format!("{:?}", du.nabla.iter().map(|(i, v)| format!("{i:?} = {v}")).collect::<Vec<_>>()))
            }
        }
        _ => Err(v.summary()),
    };
    out.push(item("du is null with the displayed covariant derivative", r));
    out
}

pub fn gprm_special_cases() -> Vec<Item> {
    let mut out = Vec::new();
    let (_, m) = specialized("gprm", &[("a", "0"), ("b", "0")], &[], &[]);
    let v = verdict(&m, "generalized_pp_wave");
    let r = match &v.witness {
        Witness::Covectors(cs) if v.status == Status::Holds => {
            let du = cs.iter().find(|c| c.label == "du").unwrap();
            if du.is_null() && du.is_parallel() {
                Ok(())
            } else {
                Err("du is not null and parallel".into())
            }
        }
        _ => Err(v.summary()),
    };
    out.push(item("a = b = 0: du parallel and null", r));

    let (_, m) = specialized("gprm", &[("f", "1/a"), ("b", "-2")], &[], &[]);
    let v = verdict(&m, "stress_energy");
    let r = match &v.witness {
        Witness::StressEnergy(StressEnergy::PureRadiation { .. }) => Ok(()),
        _ => Err(v.summary()),
    };
    out.push(item("f = 1/a, b = -2: pure radiation", r));
    out.push(status_is(&m, "semisymmetric", true).renamed("f = 1/a, b = -2: R.R = 0"));

    let (_, m) = specialized("gprm", &[("b", "-2"), ("f", "k")], &["k"], &[]);
    out.push(expect("b = -2, f constant: R.R - Q(S,R) = 0", identity(&m, "R.R - Q(S,R) == 0") == Ok(true), || "identity fails".into()));
    let v = verdict(&m, "venzi_R");
    let r = solution(&v).and_then(|s| if v.status.holds() && s.spans(&e1()) { Ok(()) } else { Err(v.summary()) });
    out.push(item("b = -2, f constant: Venzi {1,0,0,0}", r));

    let (_, m) = specialized("gprm", &[("f", "b*(3*b+4)/(4*a)")], &[], &[]);
    out.push(expect("f = b(3b+4)/(4a): kappa = 0", m.scalar().is_zero(), || m.scalar().to_string()));
    out
}

const EXAMPLE_F: &str = "exp(x^3/3)*x^(-2/3)";

pub fn gprm_examples() -> Vec<Item> {
    let mut out = Vec::new();
    let (_, m) = specialized("gprm", &[("f", EXAMPLE_F), ("b", "-2"), ("a", "0")], &[], &[]);
    let v = verdict(&m, "quasi_einstein_level");
    let r = match &v.witness {
        Witness::Rank { level: 2, .. } => Ok(()),
        _ => Err(v.summary()),
    };
    out.push(item("generic w: 2-quasi-Einstein", r));

    let (_, m) = specialized("gprm", &[("f", EXAMPLE_F), ("b", "-2"), ("a", "0"), ("w", "u*x*y")], &[], &[]);
    let v = verdict(&m, "stress_energy");
    let r = match &v.witness {
        Witness::StressEnergy(StressEnergy::PerfectFluid { pressure, sigma, eta, .. }) => {
            let p = ex(&m, "-c^4*exp(-x^3/3)*(3*x^3+1)/(24*pi*G*x^(4/3))");
            let s = ex(&m, "c^4*(3*x^3-2)/(12*pi*G*x^2)");
            let e4 = vec![Expr::zero(), Expr::zero(), Expr::zero(), Expr::one()];
            if v.status == Status::Holds && *pressure == p && *sigma == s && *eta == e4 {
                Ok(())
            } else {
                Err(format!("{} p = {pressure}, sigma = {sigma}", v.summary()))
            }
        }
        _ => Err(v.summary()),
    };
    out.push(item("w = uxy: perfect fluid with the displayed coefficients", r));
    out.push(status_is(&m, "quasi_einstein", true).renamed("w = uxy: quasi-Einstein"));
    let v = verdict(&m, "quasi_einstein_level");
    out.push(expect("w = uxy: rank(S - alpha g) <= 2", matches!(v.witness, Witness::Rank { level, .. } if level <= 2), || v.summary()));
    let v = verdict(&m, "ein_level");
    out.push(expect("w = uxy: Ein(2)", matches!(v.witness, Witness::MinimalPolynomial { degree: 2, .. }), || v.summary()));
    out
}

fn commutes(label: &str, general: &Metric, spec: &MetricSpec, special: &Metric) -> Vec<Item> {
    let a = &spec.assumptions;
    let pairs: [(&str, Tensor, Tensor); 3] = [
        ("R", general.riemann().clone(), special.riemann().clone()),
        ("S", general.ricci().clone(), special.ricci().clone()),
        ("nabla S", general.covariant_derivative(general.ricci()), special.covariant_derivative(special.ricci())),
    ];
    let mut out: Vec<Item> = pairs
        .into_iter()
        .map(|(name, g, s)| {
            let after = g.substitute(a).unwrap();
            let diff = after.sub(&s).unwrap().map(|e| special.reduce(e.clone()));
            expect(format!("{label}: {name} commutes with substitution"), diff.is_zero(), || {
                let (i, v) = diff.first_nonzero().unwrap();
                format!("{i:?}: {v}")
            })
        })
        .collect();
    let k = special.reduce(a.apply(general.scalar()).unwrap());
    out.push(expect(format!("{label}: kappa commutes with substitution"), &k == special.scalar(), || k.to_string()));
    out
}

pub fn specialization_coherence() -> Vec<Item> {
    let gprm = metric("gprm");
    let mut out = Vec::new();
    let (spec, m) = specialized("gprm", &[("a", "-p^2"), ("b", "-2"), ("f", "-1/p^2")], &["p"], &[]);
    out.extend(commutes("gprm to prm", &gprm, &spec, &m));
    let prm = metric("prm");
    out.push(expect("gprm to prm: same metric", m.g() == prm.g(), || "metrics differ".into()));
    let r = gprm.riemann().substitute(&spec.assumptions).unwrap().map(|e| m.reduce(e.clone()));
    out.push(item("prm R table from the gprm R table", check_table(&prm, &r, curvlab::geometry::Symmetry::RiemannType, PRM_R)));
    let s = gprm.ricci().substitute(&spec.assumptions).unwrap().map(|e| m.reduce(e.clone()));
    out.push(item("prm S table from the gprm S table", check_table(&prm, &s, curvlab::geometry::Symmetry::Symmetric, PRM_S)));
    let k = m.reduce(spec.assumptions.apply(&ex(&gprm, GPRM_KAPPA)).unwrap());
    out.push(expect("prm kappa from the gprm kappa", k.is_zero(), || k.to_string()));

    let (spec, m) = specialized("gprm", &[("w", "h/x"), ("a", "0"), ("b", "0"), ("f", "1")], &[], &[("h", &["u", "x", "y"])]);
    out.extend(commutes("gprm to ppw", &gprm, &spec, &m));
    let ppw = metric("ppw");
    out.push(expect("gprm to ppw: same metric", m.g() == ppw.g(), || "metrics differ".into()));
    out.push(expect("gprm to ppw: same R", m.riemann() == ppw.riemann(), || "R differs".into()));

    let (_, flat) = specialized("prm", &[("w", "0")], &[], &[]);
    out.push(expect("prm with w = 0 is flat", flat.riemann().is_zero(), || "R != 0".into()));
    out
}

/// Concrete bindings that turn a catalog metric into an explicit one.
pub fn numeric_bindings(name: &str) -> Vec<(&'static str, &'static str)> {
    match name {
        "prm" => vec![("p", "13/10"), ("w", "u*x*y + x^3 - y^2*u + x*y^3/5")],
        "gprm" => vec![("a", "7/10"), ("b", "1/3"), ("f", "1 + x^2/4 + y^2/3"), ("w", "u^2*x + x*y - y^3/4 + exp(x*y/5)")],
        "gppw" => vec![("h", "u*x^2 - x*y^2 + u^2*y/2"), ("F", "3 + x^2*y^2")],
        "ppw" => vec![("h", "x^2*y*u + y^2 - x*u^3/3")],
        other => panic!("no bindings for {other}"),
    }
}

type M4 = [[f64; 4]; 4];

fn inverse4(a: &M4) -> M4 {
    let mut m = *a;
    let mut inv = [[0.0; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for c in 0..4 {
        let p = (c..4).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
        m.swap(c, p);
        inv.swap(c, p);
        let d = m[c][c];
        for k in 0..4 {
            m[c][k] /= d;
            inv[c][k] /= d;
        }
        for r in 0..4 {
            if r != c {
                let f = m[r][c];
                for k in 0..4 {
                    m[r][k] -= f * m[c][k];
                    inv[r][k] -= f * inv[c][k];
                }
            }
        }
    }
    inv
}

/// Five-point central difference of `f` along coordinate `k`.
fn diff<T: Copy + Default, const N: usize>(f: &impl Fn([f64; 4]) -> [T; N], p: [f64; 4], k: usize, h: f64, add: impl Fn(T, T, f64) -> T) -> [T; N] {
    let at = |s: f64| {
        let mut q = p;
        q[k] += s * h;
        f(q)
    };
    let (m2, m1, p1, p2) = (at(-2.0), at(-1.0), at(1.0), at(2.0));
    let mut out = [T::default(); N];
    for i in 0..N {
        let mut v = T::default();
        for (x, w) in [(m2[i], 1.0), (m1[i], -8.0), (p1[i], 8.0), (p2[i], -1.0)] {
            v = add(v, x, w / (12.0 * h));
        }
        out[i] = v;
    }
    out
}

fn axpy_m(a: [f64; 4], b: [f64; 4], w: f64) -> [f64; 4] {
    std::array::from_fn(|i| a[i] + w * b[i])
}

fn axpy_g(a: [[f64; 4]; 4], b: [[f64; 4]; 4], w: f64) -> [[f64; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] + w * b[i][j]))
}

/// Christoffel symbols `[k][i][j]` from finite differences of `g`.
fn numeric_gamma(g: &impl Fn([f64; 4]) -> M4, p: [f64; 4]) -> [M4; 4] {
    let h = 2e-4;
    let dg: [M4; 4] = std::array::from_fn(|k| diff(g, p, k, h, axpy_m));
    let gi = inverse4(&g(p));
    std::array::from_fn(|k| {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..4).map(|l| 0.5 * gi[k][l] * (dg[i][l][j] + dg[j][l][i] - dg[l][i][j])).sum())
        })
    })
}

struct Numeric {
    gamma: [M4; 4],
    riemann: Vec<f64>,
    ricci: M4,
}

/// Curvature with the operator `-(∇a∇b - ∇b∇a)` lowered into slot 4,
/// and Ricci as the trace over slots 1 and 4.
fn numeric_curvature(g: &impl Fn([f64; 4]) -> M4, p: [f64; 4]) -> Numeric {
    let gamma = numeric_gamma(g, p);
    let gam = |q: [f64; 4]| numeric_gamma(g, q);
    let dgam: [[M4; 4]; 4] = std::array::from_fn(|a| diff(&gam, p, a, 2e-3, axpy_g));
    let gp = g(p);
    let gi = inverse4(&gp);
    // op[e][a][b][c]: textbook R(∂a,∂b)∂c along ∂e
    let op = |e: usize, a: usize, b: usize, c: usize| {
        let mut v = dgam[a][e][b][c] - dgam[b][e][a][c];
        for f in 0..4 {
            v += gamma[f][b][c] * gamma[e][a][f] - gamma[f][a][c] * gamma[e][b][f];
        }
        v
    };
    let mut riemann = vec![0.0; 256];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    riemann[((a * 4 + b) * 4 + c) * 4 + d] = -(0..4).map(|e| gp[d][e] * op(e, a, b, c)).sum::<f64>();
                }
            }
        }
    }
    let ricci = std::array::from_fn(|b| {
        std::array::from_fn(|c| {
            let mut v = 0.0;
            for a in 0..4 {
                for d in 0..4 {
                    v += gi[a][d] * riemann[((a * 4 + b) * 4 + c) * 4 + d];
                }
            }
            v
        })
    });
    Numeric { gamma, riemann, ricci }
}

fn compare_values(label: &str, engine: &[f64], numeric: &[f64]) -> Result<(), String> {
    let scale = engine.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-12);
    for (i, (e, n)) in engine.iter().zip(numeric).enumerate() {
        if (e - n).abs() > REL_TOL * scale {
            return Err(format!("{label} entry {i}: engine {e}, finite differences {n}"));
        }
    }
    Ok(())
}

/// Engine `Γ`, `R`, `S` against finite differences at random points.
pub fn numeric_cross_check(name: &str, seed: u64) -> Result<(), String> {
    let rules = numeric_bindings(name);
    let (spec, m) = specialized(name, &rules, &[], &[]);
    let ctx = spec.chart.context();
    let coords: Vec<Sym> = (1..=4).map(|i| ctx.coord_sym(i)).collect();
    let eval = |e: &Expr, p: [f64; 4]| {
        e.eval(&|s: Sym| {
            let i = coords.iter().position(|c| *c == s).unwrap_or_else(|| panic!("unbound symbol in {e}"));
            p[i]
        })
    };
    let g = |p: [f64; 4]| -> M4 { std::array::from_fn(|i| std::array::from_fn(|j| eval(m.g().get(&[i + 1, j + 1]), p))) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..POINTS {
        let p = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.6..1.6), rng.gen_range(-1.0..1.0)];
        let num = numeric_curvature(&g, p);
        let eng = |t: &Tensor| -> Vec<f64> { t.components().iter().map(|e| eval(e, p)).collect() };
        let gamma: Vec<f64> = num.gamma.iter().flatten().flatten().copied().collect();
        compare_values(&format!("{name} Gamma at {p:?}"), &eng(m.christoffel()), &gamma)?;
        compare_values(&format!("{name} R at {p:?}"), &eng(m.riemann()), &num.riemann)?;
        let ricci: Vec<f64> = num.ricci.iter().flatten().copied().collect();
        compare_values(&format!("{name} S at {p:?}"), &eng(m.ricci()), &ricci)?;
    }
    Ok(())
}

/// Structural identities that every metric satisfies.
pub fn structural_suite(name: &str) -> Vec<Item> {
    let m = metric(name);
    let ws = Workspace::new(&m);
    let zero = |label: String, t: &Tensor| {
        expect(format!("{name}: {label}"), t.is_zero(), || {
            let (i, v) = t.first_nonzero().unwrap();
            format!("{i:?} = {v}")
        })
    };
    let mut out = Vec::new();
    out.push(zero("first Bianchi".into(), &cyclic_sum(m.riemann(), [2, 3, 4]).unwrap()));
    let dr = m.covariant_derivative(m.riemann());
    out.push(zero("second Bianchi".into(), &cyclic_sum(&dr, [1, 2, 5]).unwrap()));
    out.push(zero("nabla g".into(), &m.covariant_derivative(m.g())));
    let c = ws.tensor("C").unwrap();
    for (a, b) in [(1, 4), (1, 3), (2, 3)] {
        out.push(zero(format!("C trace ({a},{b})"), &m.trace(&c, a, b).unwrap()));
    }
    for a in ["g", "S"] {
        let t = ws.tensor(a).unwrap();
        out.push(zero(format!("Q({a},{a})"), &q_operator(&m, &t, &t).unwrap()));
    }
    for d in ["R", "C", "W", "K"] {
        let t = ws.tensor(d).unwrap();
        out.push(zero(format!("{d}.g"), &dot_action(&m, &t, m.g()).unwrap()));
    }
    // P is not skew in its last pair: P.g = -(P + P with slots 3,4 swapped)
    let p = ws.tensor("P").unwrap();
    let pg = dot_action(&m, &p, m.g()).unwrap();
    let skew = Tensor::from_fn(4, pg.slots(), curvlab::geometry::Symmetry::None, |i| {
        let (z, w, x, y) = (i[0], i[1], i[2], i[3]);
        m.reduce(pg.get(i).add(p.get(&[x, y, z, w])).add(p.get(&[x, y, w, z])))
    });
    out.push(zero("P.g + P(X,Y,Z,W) + P(X,Y,W,Z)".into(), &skew));
    out
}

pub fn property_suites() -> Vec<Item> {
    let mut out = Vec::new();
    for (k, name) in curvlab::catalog::BUILTIN_NAMES.iter().enumerate() {
        out.extend(structural_suite(name));
        out.push(item(format!("{name}: finite differences at {POINTS} points"), numeric_cross_check(name, 7 + k as u64)));
    }
    out
}

pub fn comparison() -> Vec<Item> {
    let (l, r) = (metric("prm"), metric("ppw"));
    let c = compare(&l, "prm", &r, "ppw").unwrap();
    let mut out: Vec<Item> = c
        .rows
        .iter()
        .map(|row| {
            let detail = || {
                row.entries.iter().map(|(p, _, a, b)| format!("{p}: {} / {}", a.status.as_str(), b.status.as_str())).collect::<Vec<_>>().join(", ")
            };
            expect(format!("{}{} {}", row.list, row.item, row.description), row.reproduced(), detail)
        })
        .collect();
    let listed = |list: char| c.rows.iter().filter(|r| r.list == list).count();
    out.push(expect("similarity list covered", listed('A') == 12, || format!("{} rows", listed('A'))));
    out.push(expect("dissimilarity list covered", listed('B') == 3, || format!("{} rows", listed('B'))));
    let has = |p: &str| c.rows.iter().any(|r| r.entries.iter().any(|(q, ..)| q == p));
    for p in ["scalar_zero", "venzi_R", "semisymmetric", "Q(S,R)", "Q(S,C)", "ricci_simple", "ricci_1forms_recurrent", "conformal_2forms_recurrent", "P.P~Q(S,P)", "R.T", "S_recurrent"] {
        out.push(expect(format!("{p} compared"), has(p), || "missing".into()));
    }
    out
}
