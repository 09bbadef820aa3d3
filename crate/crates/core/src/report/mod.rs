//! Report documents for the command line: component listings, identity
//! checks, classification and comparison output in text or JSON form.

mod check;

pub use check::{check_identity, parse_identity, CheckError, CheckOutcome, Identity, Node};

use serde_json::{json, Value};

use crate::catalog::MetricSpec;
use crate::classify::{ClassificationReport, ClassifyError, Comparison, Expect, PropertyVerdict, StressEnergy, Witness};
use crate::curvature::{self, CurvatureError, DerivedKind};
use crate::expr::{AssumptionSet, Expr};
use crate::geometry::{Metric, Tensor};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tensor names accepted by [`components`].
pub const COMPONENT_NAMES: [&str; 15] = [
    "g",
    "inverse",
    "christoffel",
    "riemann",
    "ricci",
    "scalar",
    "conformal",
    "concircular",
    "conharmonic",
    "projective",
    "stress-energy",
    "nabla-riemann",
    "nabla-ricci",
    "nabla-conformal",
    "nabla-stress-energy",
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error("unknown tensor `{0}` (expected one of {names})", names = COMPONENT_NAMES.join(", "))]
    UnknownTensor(String),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// Nonzero orbit representatives of one tensor, labelled like `S[1][1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Listing {
    pub tensor: String,
    pub symbol: &'static str,
    pub entries: Vec<(Vec<usize>, Expr)>,
}

impl Listing {
    pub fn label(&self, idx: &[usize]) -> String {
        let mut s = self.symbol.to_string();
        for i in idx {
            s.push_str(&format!("[{i}]"));
        }
        s
    }

    /// One `label = value` line per entry; `symbol = 0` when nothing survives.
    pub fn lines(&self) -> Vec<String> {
        if self.entries.is_empty() {
            return vec![format!("{} = 0", self.symbol)];
        }
        self.entries.iter().map(|(i, v)| format!("{} = {v}", self.label(i))).collect()
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> =
            self.entries.iter().map(|(i, v)| json!({ "label": self.label(i), "index": i, "value": v.to_string() })).collect();
        json!({ "tensor": self.tensor, "symbol": self.symbol, "entries": entries })
    }
}

fn listing(name: &str, symbol: &'static str, t: &Tensor) -> Listing {
    Listing { tensor: name.into(), symbol, entries: t.representatives() }
}

/// Components of a named tensor. `scalar` lists `kappa` even when it vanishes.
pub fn components(m: &Metric, name: &str) -> Result<Listing, ReportError> {
    let derived = |k| curvature::derived(m, k);
    let nabla = |t: &Tensor| m.covariant_derivative(t);
    Ok(match name {
        "g" => listing(name, "g", m.g()),
        "inverse" => listing(name, "ginv", m.inverse()),
        "christoffel" => listing(name, "Gamma", m.christoffel()),
        "riemann" => listing(name, "R", m.riemann()),
        "ricci" => listing(name, "S", m.ricci()),
        "scalar" => Listing { tensor: name.into(), symbol: "kappa", entries: vec![(vec![], m.scalar().clone())] },
        "conformal" => listing(name, "C", &derived(DerivedKind::Conformal)),
        "concircular" => listing(name, "W", &derived(DerivedKind::Concircular)),
        "conharmonic" => listing(name, "K", &derived(DerivedKind::Conharmonic)),
        "projective" => listing(name, "P", &derived(DerivedKind::Projective)),
        "stress-energy" => listing(name, "T", &curvature::energy_momentum(m)?),
        "nabla-riemann" => listing(name, "nablaR", &nabla(m.riemann())),
        "nabla-ricci" => listing(name, "nablaS", &nabla(m.ricci())),
        "nabla-conformal" => listing(name, "nablaC", &nabla(&derived(DerivedKind::Conformal))),
        "nabla-stress-energy" => listing(name, "nablaT", &nabla(&curvature::energy_momentum(m)?)),
        other => return Err(ReportError::UnknownTensor(other.into())),
    })
}

fn strings(v: &[Expr]) -> Vec<String> {
    v.iter().map(Expr::to_string).collect()
}

pub fn assumptions_json(a: &AssumptionSet) -> Value {
    let subs: Vec<Value> =
        a.substitutions().iter().map(|s| json!({ "target": Expr::sym(s.target).to_string(), "value": s.value.to_string() })).collect();
    json!({ "substitutions": subs, "nonzero": strings(a.nonzero()) })
}

pub fn metric_json(spec: &MetricSpec) -> Value {
    let coords: Vec<&str> = spec.chart.context().coords().iter().map(|c| c.name.as_str()).collect();
    json!({ "name": spec.name, "description": spec.description, "coordinates": coords })
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::None => Value::Null,
        Witness::Solution(s) => json!({
            "kind": "solution",
            "unknowns": s.unknowns,
            "dimension": s.dimension(),
            "particular": strings(&s.particular),
            "basis": s.basis.iter().map(|b| strings(b)).collect::<Vec<_>>(),
        }),
        Witness::Relation { basis, constant } => json!({
            "kind": "relation",
            "basis": basis.iter().map(|b| strings(b)).collect::<Vec<_>>(),
            "constant": constant,
        }),
        Witness::Rank { level, alpha, generic, .. } => {
            json!({ "kind": "rank", "level": level, "alpha": alpha.to_string(), "generic": generic })
        }
        Witness::MinimalPolynomial { degree, lambdas } => {
            json!({ "kind": "minimal_polynomial", "degree": degree, "lambdas": strings(lambdas) })
        }
        Witness::Simple { beta, eta } => json!({ "kind": "simple", "beta": beta.to_string(), "eta": strings(eta) }),
        Witness::StressEnergy(se) => {
            let mut v = match se {
                StressEnergy::Vacuum => json!({}),
                StressEnergy::PureRadiation { rho, eta, norm } => {
                    json!({ "rho": rho.to_string(), "eta": strings(eta), "norm": norm.to_string() })
                }
                StressEnergy::PerfectFluid { pressure, sigma, eta, norm } => json!({
                    "pressure": pressure.to_string(),
                    "sigma": sigma.to_string(),
                    "eta": strings(eta),
                    "norm": norm.to_string(),
                }),
                StressEnergy::General { alpha, beta, sigma, remainder } => json!({
                    "alpha": alpha.to_string(),
                    "beta": strings(beta),
                    "sigma": strings(sigma),
                    "remainder": remainder.iter().map(|(i, e)| json!({ "index": i, "value": e.to_string() })).collect::<Vec<_>>(),
                }),
            };
            v["kind"] = json!("stress_energy");
            v["type"] = json!(se.kind());
            v
        }
        Witness::Covectors(cs) => json!({
            "kind": "covectors",
            "candidates": cs.iter().map(|c| json!({
                "label": c.label,
                "components": strings(&c.components),
                "norm": c.norm.to_string(),
                "null": c.is_null(),
                "parallel": c.is_parallel(),
                "nabla": c.nabla.iter().map(|(i, e)| json!({ "index": i, "value": e.to_string() })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }),
        Witness::Scalar(e) => json!({ "kind": "scalar", "value": e.to_string() }),
    }
}

pub fn verdict_json(v: &PropertyVerdict) -> Value {
    json!({
        "name": v.name,
        "status": v.status.as_str(),
        "summary": v.summary(),
        "witness": witness_json(&v.witness),
        "certificate": v.certificate.as_ref().map(|c| json!({ "index": c.index, "residual": c.residual.to_string() })),
        "assumptions": strings(&v.assumptions),
        "notes": v.notes,
    })
}

/// `verdicts` and `cross_references` fields of a classification document.
pub fn classification_json(r: &ClassificationReport) -> Vec<(&'static str, Value)> {
    let refs: Vec<Value> = r
        .cross_references
        .iter()
        .map(|c| json!({ "premise": c.premise, "conclusion": c.conclusion, "consistent": c.consistent }))
        .collect();
    vec![("verdicts", Value::Array(r.verdicts.iter().map(verdict_json).collect())), ("cross_references", Value::Array(refs))]
}

fn expect_str(e: Expect) -> &'static str {
    match e {
        Expect::Both => "both",
        Expect::Neither => "neither",
        Expect::LeftOnly => "left-only",
        Expect::RightOnly => "right-only",
    }
}

/// Text table of a comparison: one line per property with both statuses.
pub fn comparison_lines(c: &Comparison) -> Vec<String> {
    let mut out = vec![format!("comparison {} vs {}", c.left, c.right)];
    for row in &c.rows {
        let mark = if row.reproduced() { "reproduced" } else { "NOT reproduced" };
        out.push(format!("{}{} {}: {mark}", row.list, row.item, row.description));
        for (p, e, l, r) in &row.entries {
            out.push(format!("    {p}: {} = {}, {} = {} (expected {})", c.left, l.status, c.right, r.status, expect_str(*e)));
        }
    }
    out
}

pub fn comparison_json(c: &Comparison) -> Value {
    json!({
        "left": c.left,
        "right": c.right,
        "rows": c.rows.iter().map(|row| json!({
            "list": row.list.to_string(),
            "item": row.item,
            "description": row.description,
            "reproduced": row.reproduced(),
            "entries": row.entries.iter().map(|(p, e, l, r)| json!({
                "property": p,
                "expected": expect_str(*e),
                "left": verdict_json(l),
                "right": verdict_json(r),
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

/// The machine-format document: `{version, metric, assumptions, ...}`.
pub fn document(spec: &MetricSpec, extra: Vec<(&str, Value)>) -> Value {
    let mut doc = json!({
        "version": VERSION,
        "metric": metric_json(spec),
        "assumptions": assumptions_json(&spec.assumptions),
    });
    for (k, v) in extra {
        doc[k] = v;
    }
    doc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;

    #[test]
    fn prm_scalar_listing_prints_zero() {
        let m = builtin("prm").unwrap().metric().unwrap();
        assert_eq!(components(&m, "scalar").unwrap().lines(), vec!["kappa = 0".to_string()]);
    }

    #[test]
    fn unknown_tensor_is_an_error() {
        let m = builtin("ppw").unwrap().metric().unwrap();
        assert!(matches!(components(&m, "torsion"), Err(ReportError::UnknownTensor(_))));
    }

    #[test]
    fn document_has_the_required_fields() {
        let spec = builtin("ppw").unwrap();
        let doc = document(&spec, vec![]);
        for k in ["version", "metric", "assumptions"] {
            assert!(doc.get(k).is_some(), "{k}");
        }
    }
}
