use rayon::prelude::*;

use super::structures::*;
use super::{ClassifyError, PropertyVerdict, Status, Witness, Workspace};
use crate::curvature;
use crate::geometry::Metric;

type Eval = Box<dyn Fn(&Workspace) -> Result<Vec<PropertyVerdict>, ClassifyError> + Send + Sync>;

/// A set of properties computed together.
struct Group {
    names: Vec<String>,
    eval: Eval,
}

fn group(names: &[&str], eval: impl Fn(&Workspace) -> Result<Vec<PropertyVerdict>, ClassifyError> + Send + Sync + 'static) -> Group {
    Group { names: names.iter().map(|s| s.to_string()).collect(), eval: Box::new(eval) }
}

const ACTING: [&str; 5] = ["R", "C", "P", "W", "K"];
const TARGETS: [&str; 7] = ["R", "S", "C", "P", "W", "K", "T"];

/// `(name, D, H, A, K)` for a relation between `D·H` and `Q(A,K)`.
const RELATIONS: [(&str, &str, &str, &str, &str); 5] = [
    ("R.R~Q(g,R)", "R", "R", "g", "R"),
    ("R.R~Q(S,R)", "R", "R", "S", "R"),
    ("R.S~Q(g,S)", "R", "S", "g", "S"),
    ("C.C~Q(g,C)", "C", "C", "g", "C"),
    ("P.P~Q(S,P)", "P", "P", "S", "P"),
];

fn groups() -> Vec<Group> {
    let mut out = vec![
        group(&["scalar_zero"], |ws| {
            let k = ws.metric().scalar().clone();
            let mut v = PropertyVerdict::new("scalar_zero", if k.is_zero() { Status::Holds } else { Status::Fails });
            v.witness = Witness::Scalar(k.clone());
            if !k.is_zero() {
                v.certificate = Some(super::Certificate { index: vec![], residual: k });
            }
            Ok(vec![v])
        }),
        group(&["quasi_einstein_level", "einstein", "quasi_einstein", "ricci_simple"], quasi_einstein_level),
        group(&["ein_level"], |ws| Ok(vec![ein_level(ws)?])),
        group(&["S2_zero", "SS_zero"], |ws| {
            let s2 = curvature::ricci_power(ws.metric(), &*ws.tensor("S")?, 2)?;
            Ok(vec![PropertyVerdict::zero_check("S2_zero", &s2), PropertyVerdict::zero_check("SS_zero", &*ws.tensor("SS")?)])
        }),
        group(&["W_equals_R", "K_equals_C"], |ws| {
            let w = ws.tensor("W")?.sub(&*ws.tensor("R")?)?;
            let k = ws.tensor("K")?.sub(&*ws.tensor("C")?)?;
            Ok(vec![PropertyVerdict::zero_check("W_equals_R", &w), PropertyVerdict::zero_check("K_equals_C", &k)])
        }),
        group(&["S_parallel", "S_codazzi", "S_cyclic_parallel", "S_recurrent"], |ws| derivative_class(ws, "S")),
        group(&["T_parallel", "T_codazzi", "T_cyclic_parallel", "T_recurrent"], |ws| derivative_class(ws, "T")),
    ];
    for d in ACTING {
        out.push(group(&[&format!("{d}_parallel")], move |ws| Ok(vec![PropertyVerdict::zero_check(format!("{d}_parallel"), &*ws.nabla(d)?)])));
    }
    out.push(group(&["R_recurrent"], |ws| Ok(vec![recurrence(ws, "R")?])));
    out.push(group(&["C_recurrent"], |ws| Ok(vec![recurrence(ws, "C")?])));
    out.push(group(&["semisymmetric"], |ws| Ok(vec![semisymmetry_check(ws, "R", "R")?.renamed("semisymmetric")])));
    for d in ACTING {
        for h in TARGETS {
            out.push(group(&[&format!("{d}.{h}")], move |ws| Ok(vec![semisymmetry_check(ws, d, h)?])));
        }
    }
    out.push(group(&["P.Rop"], |ws| Ok(vec![semisymmetry_check(ws, "P", "Rop")?])));
    out.push(group(&["P.Sop"], |ws| Ok(vec![semisymmetry_check(ws, "P", "Sop")?])));
    for (a, h) in [("S", "R"), ("S", "C"), ("S", "P")] {
        let name = format!("Q({a},{h})");
        out.push(group(&[&name.clone()], move |ws| {
            let q = curvature::q_operator(ws.metric(), &*ws.tensor(a)?, &*ws.tensor(h)?)?;
            Ok(vec![PropertyVerdict::zero_check(name.clone(), &q)])
        }));
    }
    for (name, d, h, a, k) in RELATIONS {
        out.push(group(&[name], move |ws| {
            let m = ws.metric();
            let lhs = curvature::dot_action(m, &*ws.tensor(d)?, &*ws.tensor(h)?)?;
            let rhs = curvature::q_operator(m, &*ws.tensor(a)?, &*ws.tensor(k)?)?;
            Ok(vec![find_linear_relation(ws, name, &[lhs, rhs])?])
        }));
    }
    for d in ACTING {
        out.push(group(&[&format!("venzi_{d}")], move |ws| Ok(vec![solve_venzi(ws, d)?])));
        out.push(group(&[&format!("S_{d}_compatible")], move |ws| Ok(vec![is_compatible(ws, "S", d)?])));
    }
    for d in ["R", "C", "P"] {
        out.push(group(&[&format!("{d}_compatible_space")], move |ws| Ok(vec![solve_compatibility(ws, d, CompatibilityMode::Symmetric)?])));
    }
    out.push(group(&["ricci_1forms_recurrent"], |ws| Ok(vec![one_forms_recurrence(ws, "ricci_1forms_recurrent", "S")?])));
    out.push(group(&["curvature_2forms_recurrent"], |ws| Ok(vec![two_forms_recurrence(ws, "curvature_2forms_recurrent", "R")?])));
    out.push(group(&["conformal_2forms_recurrent"], |ws| Ok(vec![two_forms_recurrence(ws, "conformal_2forms_recurrent", "C")?])));
    out.push(group(&["super_generalized_recurrent"], |ws| Ok(vec![super_generalized_recurrence(ws)?])));
    out.push(group(&["weakly_ricci_symmetric", "chaki_pseudo_ricci_symmetric"], |ws| {
        Ok(solve_weak_symmetry(ws, "weakly_ricci_symmetric", "chaki_pseudo_ricci_symmetric", "S", WeakKind::Plain)?.into())
    }));
    out.push(group(&["weakly_cyclic_ricci_symmetric"], |ws| {
        let [w, _] = solve_weak_symmetry(ws, "weakly_cyclic_ricci_symmetric", "-", "S", WeakKind::Cyclic)?;
        Ok(vec![w])
    }));
    for d in ACTING {
        let (weak, chaki) = (format!("weakly_symmetric_{d}"), format!("chaki_pseudosymmetric_{d}"));
        out.push(group(&[&weak.clone(), &chaki.clone()], move |ws| Ok(solve_weak_symmetry(ws, &weak, &chaki, d, WeakKind::Plain)?.into())));
    }
    for d in ["R", "C", "P"] {
        let name = format!("div_{d}_zero");
        out.push(group(&[&name.clone()], move |ws| {
            let t = curvature::divergence(ws.metric(), &*ws.tensor(d)?, 1)?;
            Ok(vec![PropertyVerdict::zero_check(name.clone(), &t)])
        }));
    }
    out.push(group(&["stress_energy"], |ws| Ok(vec![classify_stress_energy(ws)?])));
    out.push(group(&["generalized_pp_wave"], |ws| {
        let c = default_covectors(ws.metric());
        Ok(vec![constant_null_covector_check(ws, &c)?])
    }));
    out
}

/// Names of every property in the battery, in report order.
pub fn property_names() -> Vec<String> {
    groups().into_iter().flat_map(|g| g.names).collect()
}

/// `premise` holding forces `conclusion`; both are computed independently.
const IMPLICATIONS: [(&str, &str); 15] = [
    ("semisymmetric", "R.S"),
    ("semisymmetric", "R.C"),
    ("semisymmetric", "R.P"),
    ("semisymmetric", "R.W"),
    ("semisymmetric", "R.K"),
    ("semisymmetric", "R.T"),
    ("R_parallel", "semisymmetric"),
    ("R_parallel", "R_recurrent"),
    ("S_parallel", "S_codazzi"),
    ("S_parallel", "S_cyclic_parallel"),
    ("T_parallel", "T_codazzi"),
    ("T_parallel", "T_cyclic_parallel"),
    ("einstein", "quasi_einstein"),
    ("ricci_simple", "quasi_einstein"),
    ("weakly_ricci_symmetric", "weakly_cyclic_ricci_symmetric"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossReference {
    pub premise: String,
    pub conclusion: String,
    /// The independently computed conclusion agrees with the implication.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub metric: String,
    pub verdicts: Vec<PropertyVerdict>,
    pub cross_references: Vec<CrossReference>,
}

impl ClassificationReport {
    pub fn get(&self, name: &str) -> Option<&PropertyVerdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn status(&self, name: &str) -> Option<Status> {
        self.get(name).map(|v| v.status)
    }
}

/// Runs the battery, or the listed properties only. Independent groups are
/// evaluated in parallel; the order of the output is fixed.
pub fn classify(m: &Metric, metric: &str, only: Option<&[&str]>) -> Result<ClassificationReport, ClassifyError> {
    let all = groups();
    if let Some(names) = only {
        for n in names {
            if !all.iter().any(|g| g.names.iter().any(|x| x == n)) {
                return Err(ClassifyError::UnknownProperty(n.to_string()));
            }
        }
    }
    let wanted = |name: &str| only.is_none_or(|ns| ns.contains(&name));
    let ws = Workspace::new(m);
    let picked: Vec<&Group> = all.iter().filter(|g| g.names.iter().any(|n| wanted(n))).collect();
    let results = picked.par_iter().map(|g| (g.eval)(&ws)).collect::<Result<Vec<_>, _>>()?;
    let verdicts: Vec<PropertyVerdict> = results.into_iter().flatten().filter(|v| wanted(&v.name)).collect();
    let mut cross_references = Vec::new();
    for (p, c) in IMPLICATIONS {
        let (Some(pv), Some(cv)) = (verdicts.iter().find(|v| v.name == p), verdicts.iter().find(|v| v.name == c)) else {
            continue;
        };
        if pv.status.holds() {
            cross_references.push(CrossReference {
                premise: p.into(),
                conclusion: c.into(),
                consistent: cv.status.holds() || cv.status == Status::Vacuous,
            });
        }
    }
    Ok(ClassificationReport { metric: metric.to_string(), verdicts, cross_references })
}

/// Which statuses a row expects on the two metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expect {
    Both,
    Neither,
    LeftOnly,
    RightOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonRow {
    pub list: char,
    pub item: usize,
    pub description: &'static str,
    /// `(property, expectation, left verdict, right verdict)`.
    pub entries: Vec<(String, Expect, PropertyVerdict, PropertyVerdict)>,
}

impl ComparisonRow {
    /// Every computed pair matches the expectation.
    pub fn reproduced(&self) -> bool {
        self.entries.iter().all(|(_, e, l, r)| {
            let (l, r) = (l.holds(), r.holds());
            match e {
                Expect::Both => l && r,
                Expect::Neither => !l && !r,
                Expect::LeftOnly => l && !r,
                Expect::RightOnly => !l && r,
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub left: String,
    pub right: String,
    pub rows: Vec<ComparisonRow>,
}

/// Similarities (list A) and dissimilarities (list B) between a pure
/// radiation metric (left) and a pp-wave metric (right).
const ROWS: [(char, usize, &str, &[(&str, Expect)]); 15] = [
    ('A', 1, "vanishing scalar curvature", &[("scalar_zero", Expect::Both)]),
    ('A', 2, "R-space and C-space by Venzi", &[("venzi_R", Expect::Both), ("venzi_C", Expect::Both)]),
    ('A', 3, "semisymmetric, and C.R = 0", &[("semisymmetric", Expect::Both), ("C.R", Expect::Both)]),
    ('A', 4, "Q(S,R) = Q(S,C) = 0", &[("Q(S,R)", Expect::Both), ("Q(S,C)", Expect::Both)]),
    ('A', 5, "Ricci simple", &[("ricci_simple", Expect::Both)]),
    ('A', 6, "Ricci tensor Riemann and conformal compatible", &[("S_R_compatible", Expect::Both), ("S_C_compatible", Expect::Both)]),
    ('A', 7, "Ricci 1-forms recurrent", &[("ricci_1forms_recurrent", Expect::Both)]),
    ('A', 8, "conformal 2-forms recurrent", &[("conformal_2forms_recurrent", Expect::Both)]),
    ('A', 9, "P.R = 0 but P.Rop != 0", &[("P.R", Expect::Both), ("P.Rop", Expect::Neither)]),
    ('A', 10, "weakly Ricci symmetric and weakly cyclic Ricci symmetric", &[("weakly_ricci_symmetric", Expect::Both), ("weakly_cyclic_ricci_symmetric", Expect::Both)]),
    ('A', 11, "P.P = -1/3 Q(S,P)", &[("P.P~Q(S,P)", Expect::Both)]),
    ('A', 12, "stress-energy semisymmetric", &[("R.T", Expect::Both)]),
    ('B', 1, "rank one stress-energy with null 1-form, covariantly constant only for the pp-wave", &[("stress_energy", Expect::Both), ("generalized_pp_wave", Expect::RightOnly)]),
    ('B', 2, "Ricci recurrent only for the pp-wave", &[("S_recurrent", Expect::RightOnly)]),
    ('B', 3, "stress-energy cyclic parallel and parallel (generic verdicts)", &[("T_cyclic_parallel", Expect::Neither), ("T_parallel", Expect::Neither)]),
];

/// Runs both metrics through the properties of lists A and B.
pub fn compare(left: &Metric, left_name: &str, right: &Metric, right_name: &str) -> Result<Comparison, ClassifyError> {
    let mut props: Vec<&str> = ROWS.iter().flat_map(|r| r.3.iter().map(|(p, _)| *p)).collect();
    props.dedup();
    let (a, b) = rayon::join(|| classify(left, left_name, Some(&props)), || classify(right, right_name, Some(&props)));
    let (a, b) = (a?, b?);
    let rows = ROWS
        .iter()
        .map(|(list, item, description, entries)| ComparisonRow {
            list: *list,
            item: *item,
            description,
            entries: entries
                .iter()
                .map(|(p, e)| (p.to_string(), *e, a.get(p).expect("computed").clone(), b.get(p).expect("computed").clone()))
                .collect(),
        })
        .collect();
    Ok(Comparison { left: left_name.into(), right: right_name.into(), rows })
}
