//! Shared fixtures: the published component tables of the pure radiation
//! metric (prm) and the pure radiation type metric (gprm).

#![allow(dead_code)]

pub mod criteria;

use curvlab::catalog::builtin;
use curvlab::curvature::{derived, energy_momentum, DerivedKind};
use curvlab::expr::{parse_expr, Expr};
use curvlab::geometry::{Metric, Symmetry, Tensor};

pub fn metric(name: &str) -> Metric {
    builtin(name).unwrap().metric().unwrap()
}

pub fn ex(m: &Metric, s: &str) -> Expr {
    parse_expr(m.chart(), s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

/// Index like "1313" or "1313,1" to a 1-based tuple.
pub fn idx(s: &str) -> Vec<usize> {
    s.chars().filter(|c| c.is_ascii_digit()).map(|c| c.to_digit(10).unwrap() as usize).collect()
}

/// Checks `t` against the listed entries. `sym` describes which index
/// permutations the listing leaves implicit; any other nonzero entry is an error.
pub fn check_table(m: &Metric, t: &Tensor, sym: Symmetry, entries: &[(&str, &str)]) -> Result<(), String> {
    let mut expected = Tensor::zeros(t.dim(), t.slots());
    for (i, v) in entries {
        let i = idx(i);
        let v = ex(m, v);
        if t.get(&i) != &v {
            return Err(format!("component {i:?}: got {}, expected {v}", t.get(&i)));
        }
        for (j, s) in sym.orbit(&i) {
            expected.set(&j, if s == 1 { v.clone() } else { v.neg() });
        }
    }
    for (i, v) in t.nonzero() {
        if expected.get(&i) != &v {
            return Err(format!("component {i:?} = {v} is not in the table"));
        }
    }
    Ok(())
}

/// A published table: label, tensor, implicit symmetry and entries.
pub struct Table {
    pub label: &'static str,
    pub tensor: Tensor,
    pub sym: Symmetry,
    pub entries: &'static [(&'static str, &'static str)],
}

impl Table {
    pub fn check(&self, m: &Metric) -> Result<(), String> {
        check_table(m, &self.tensor, self.sym, self.entries).map_err(|e| format!("{}: {e}", self.label))
    }
}

pub const PRM_R: &[(&str, &str)] = &[("1313", "-w_33*x/2"), ("1314", "-w_34*x/2"), ("1414", "-w_44*x/2")];

pub const PRM_S: &[(&str, &str)] = &[("11", "-1/2*p^2*(w_33+w_44)*x")];

pub const PRM_C: &[(&str, &str)] = &[("1313", "-1/4*(w_33-w_44)*x"), ("1414", "1/4*(w_33-w_44)*x"), ("1314", "-w_34*x/2")];

pub const PRM_P: &[(&str, &str)] = &[
    ("1211", "-1/6*p^2*(w_33+w_44)*x"),
    ("1311", "1/3*p^2*r*(w_33+w_44)"),
    ("1313", "-1/6*(2*w_33-w_44)*x"),
    ("1314", "-w_34*x/2"),
    ("1341", "w_34*x/2"),
    ("1413", "-w_34*x/2"),
    ("1431", "w_34*x/2"),
    ("1331", "w_33*x/2"),
    ("1414", "1/6*(w_33-2*w_44)*x"),
    ("1441", "w_44*x/2"),
];

pub const PRM_NABLA_R: &[(&str, &str)] = &[
    ("1213,1", "p^2*w_33/2"),
    ("1214,1", "p^2*w_34/2"),
    ("1313,1", "-(x^2*w_133+2*p^2*r*w_33)/(2*x)"),
    ("1414,1", "(2*p^2*r*w_44-x^2*w_144)/(2*x)"),
    ("1313,3", "1/2*(w_33-w_333*x)"),
    ("1313,4", "-w_334*x/2"),
    ("1314,1", "-w_134*x/2"),
    ("1414,3", "1/2*(w_44-w_344*x)"),
    ("1314,3", "1/2*(w_34-w_334*x)"),
    ("1314,4", "-w_344*x/2"),
    ("1334,1", "w_34/2"),
    ("1414,4", "-w_444*x/2"),
    ("1434,1", "w_44/2"),
];

pub const PRM_NABLA_S: &[(&str, &str)] = &[
    ("11,1", "p^2*(-x^2*w_144-x^2*w_133+2*p^2*r*w_33+2*p^2*r*w_44)/(2*x)"),
    ("11,3", "1/2*p^2*(-w_333*x-w_344*x+w_33+w_44)"),
    ("11,4", "-1/2*p^2*(w_334+w_444)*x"),
    ("13,1", "1/2*p^2*(w_33+w_44)"),
];

pub const PRM_NABLA_C: &[(&str, &str)] = &[
    ("1213,1", "1/4*p^2*(w_33-w_44)"),
    ("1214,1", "p^2*w_34/2"),
    ("1313,1", "-(-x^2*w_144+x^2*w_133+2*p^2*r*w_33-2*p^2*r*w_44)/(4*x)"),
    ("1313,3", "1/4*(-w_333*x+w_344*x+w_33-w_44)"),
    ("1414,3", "-1/4*(-w_333*x+w_344*x+w_33-w_44)"),
    ("1313,4", "-1/4*(w_334-w_444)*x"),
    ("1414,4", "1/4*(w_334-w_444)*x"),
    ("1314,1", "-w_134*x/2"),
    ("1314,3", "1/2*(w_34-w_334*x)"),
    ("1314,4", "-w_344*x/2"),
    ("1334,1", "w_34/2"),
    ("1414,1", "-(x^2*w_144-x^2*w_133+2*p^2*r*w_33-2*p^2*r*w_44)/(4*x)"),
    ("1434,1", "-1/4*(w_33-w_44)"),
];

/// The stress-energy entry exactly as printed.
pub const PRM_T_PRINTED: &[(&str, &str)] = &[("11", "-c^4*(p^2*w_33*x+p^2*w_44*x)/(16*pi*G*x^2)")];

/// The stress-energy entry implied by the printed Ricci tensor and `kappa = 0`.
pub const PRM_T_FROM_RICCI: &[(&str, &str)] = &[("11", "-c^4*p^2*(w_33+w_44)*x/(16*pi*G)")];

pub const PRM_NABLA_T: &[(&str, &str)] = &[
    ("11,1", "c^4*p^2*(-x^2*w_144-x^2*w_133+2*p^2*r*w_33+2*p^2*r*w_44)/(16*pi*G*x)"),
    ("13,1", "c^4*p^2*(w_33+w_44)/(16*pi*G)"),
    ("11,3", "c^4*p^2*(-w_333*x-w_344*x+w_33+w_44)/(16*pi*G)"),
    ("11,4", "-c^4*p^2*(w_334+w_444)*x/(16*pi*G)"),
];

pub const GPRM_R: &[(&str, &str)] = &[
    ("1212", "-(4*a*f-b^2)/(4*f*x^2)"),
    ("1213", "r*(8*a*f+b^3)/(4*f*x^3)"),
    ("1334", "-b^2*f_4*r/(4*f*x^2)"),
    (
        "1313",
        "-1/(4*f*x^4)*(a*b^2*f*r^2+2*a*b*f_3*r^2*x+2*a*f_3*r^2*x+12*a*f*r^2-b^4*r^2+b^2*f*w*x^3\
         +2*b*f*w_3*x^4+2*b*f*w*x^3-f_3*w_3*x^5+f_4*w_4*x^5+2*f*w_33*x^5-f_3*w*x^4+4*f*w_3*x^4)",
    ),
    (
        "1314",
        "-(2*a*b*f_4*r^2+2*a*f_4*r^2+b*f*w_4*x^3-f_4*w_3*x^4-f_3*w_4*x^4+2*f*w_34*x^4-f_4*w*x^3+2*f*w_4*x^3)/(4*f*x^3)",
    ),
    ("1323", "-b*(b*f+f_3*x+2*f)/(4*f*x^2)"),
    ("1324", "-b*f_4/(4*f*x)"),
    ("1423", "-b*f_4/(4*f*x)"),
    ("1414", "-(-2*a*b*f_3*r^2-2*a*f_3*r^2+f_3*w_3*x^4-f_4*w_4*x^4+2*f*w_44*x^4+f_3*w*x^3)/(4*f*x^3)"),
    ("1424", "b*f_3/(4*f*x)"),
    ("1434", "b^2*f_3*r/(4*f*x^2)"),
    ("3434", "-(-f_3^2-f_4^2+f*f_33+f*f_44)/(2*f)"),
];

pub const GPRM_S: &[(&str, &str)] = &[
    (
        "11",
        "(2*a^2*f*r^2-3*a*b^2*r^2-8*a*b*r^2+2*a*f*w*x^3-6*a*r^2-b*(b*w+w_3*x+w)*x^3-(w_33+w_44)*x^5-2*w_3*x^4)/(-2*f*x^4)",
    ),
    ("12", "-(2*a*f-b^2-b)/(2*f*x^2)"),
    ("44", "-(b*f*f_3+f_3^2*x+f_4^2*x-f*f_33*x-f*f_44*x)/(2*f^2*x)"),
    ("34", "b*f_4/(2*f*x)"),
    ("13", "r*(4*a*f+b^3+b^2)/(2*f*x^3)"),
    ("33", "(b^2*f^2+2*b*f^2+b*f_3*f*x+f_33*f*x^2+f_44*f*x^2-f_3^2*x^2-f_4^2*x^2)/(2*f^2*x^2)"),
];

pub const GPRM_KAPPA: &str = "(-4*a*f^3+b*(3*b+4)*f^2+2*(f_33+f_44)*f*x^2-2*(f_3^2+f_4^2)*x^2)/(2*f^3*x^2)";

pub const GPRM_T: &[(&str, &str)] = &[
    (
        "11",
        "c^4/(32*pi*f^3*G*x^4)*(3*a*b^2*f^2*r^2+12*a*b*f^2*r^2+12*a*f^2*r^2+2*a*f_3^2*r^2*x^2+2*a*f_4^2*r^2*x^2\
         -2*a*f*f_33*r^2*x^2-2*a*f*f_44*r^2*x^2-b^2*f^2*w*x^3+2*b*f^2*w_3*x^4-2*b*f^2*w*x^3+2*f^2*w_33*x^5\
         +2*f^2*w_44*x^5+4*f^2*w_3*x^4+2*f_3^2*w*x^5+2*f_4^2*w*x^5-2*f*f_33*w*x^5-2*f*f_44*w*x^5)",
    ),
    ("12", "-c^4*(b^2*f^2+2*b*f^2+2*f_33*f*x^2+2*f_44*f*x^2-2*f_3^2*x^2-2*f_4^2*x^2)/(32*pi*f^3*G*x^2)"),
    (
        "13",
        "c^4*r*(4*a*b*f^3+8*a*f^3+b^3*(-f^2)-2*b^2*f^2+2*b*f_3^2*x^2+2*b*f_4^2*x^2-2*b*f*f_33*x^2-2*b*f*f_44*x^2)/(32*pi*f^3*G*x^3)",
    ),
    ("33", "c^4*(4*a*f^2+b^2*(-f)+2*b*f_3*x)/(32*pi*f*G*x^2)"),
    ("34", "b*c^4*f_4/(16*pi*f*G*x)"),
    ("44", "c^4*(4*a*f^2-3*b^2*f-2*b*f_3*x-4*b*f)/(32*pi*f*G*x^2)"),
];

/// Every prm table, with the stress-energy entry as printed.
pub fn prm_tables(m: &Metric) -> Vec<Table> {
    let t = energy_momentum(m).unwrap();
    let c = derived(m, DerivedKind::Conformal);
    vec![
        Table { label: "R", tensor: m.riemann().clone(), sym: Symmetry::RiemannType, entries: PRM_R },
        Table { label: "S", tensor: m.ricci().clone(), sym: Symmetry::Symmetric, entries: PRM_S },
        Table { label: "C", tensor: c.clone(), sym: Symmetry::RiemannType, entries: PRM_C },
        Table { label: "P", tensor: derived(m, DerivedKind::Projective), sym: Symmetry::AntiFirstPair, entries: PRM_P },
        Table { label: "nabla R", tensor: m.covariant_derivative(m.riemann()), sym: Symmetry::RiemannType, entries: PRM_NABLA_R },
        Table { label: "nabla S", tensor: m.covariant_derivative(m.ricci()), sym: Symmetry::Symmetric, entries: PRM_NABLA_S },
        Table { label: "nabla C", tensor: m.covariant_derivative(&c), sym: Symmetry::RiemannType, entries: PRM_NABLA_C },
        Table { label: "T", tensor: t.clone(), sym: Symmetry::Symmetric, entries: PRM_T_PRINTED },
        Table { label: "nabla T", tensor: m.covariant_derivative(&t), sym: Symmetry::Symmetric, entries: PRM_NABLA_T },
    ]
}

pub fn gprm_tables(m: &Metric) -> Vec<Table> {
    vec![
        Table { label: "R", tensor: m.riemann().clone(), sym: Symmetry::RiemannType, entries: GPRM_R },
        Table { label: "S", tensor: m.ricci().clone(), sym: Symmetry::Symmetric, entries: GPRM_S },
        Table { label: "T", tensor: energy_momentum(m).unwrap(), sym: Symmetry::Symmetric, entries: GPRM_T },
    ]
}
