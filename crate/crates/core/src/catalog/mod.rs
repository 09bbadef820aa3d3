//! Built-in metrics, metric documents and specializations.

mod document;

pub use document::{load, parse_target, serialize, DocumentError, DocumentErrorKind};

use crate::expr::{parse_expr, AssumptionError, AssumptionSet, DeclError, ParseError, ParseErrorKind};
use crate::geometry::{Chart, GeometryError, Metric, Tensor};
use crate::linalg;

/// A metric as declared: chart, raw components and assumptions. The
/// assumptions are applied when the [`Metric`] is built.
#[derive(Debug, Clone)]
pub struct MetricSpec {
    pub name: String,
    pub description: String,
    pub chart: Chart,
    pub components: Tensor,
    pub assumptions: AssumptionSet,
}

impl MetricSpec {
    pub fn metric(&self) -> Result<Metric, GeometryError> {
        Metric::new(self.chart.clone(), self.components.clone(), self.assumptions.clone())
    }

    /// Components with the substitutions applied.
    pub fn reduced_components(&self) -> Result<Tensor, AssumptionError> {
        self.components.substitute(&self.assumptions)
    }

    /// Adds declarations and substitution rules. Components are kept as
    /// written; the rules take effect when the metric is built.
    pub fn specialize(&self, s: &Specialization) -> Result<MetricSpec, SpecializationError> {
        let mut ctx = self.chart.context().clone();
        for c in &s.constants {
            ctx.add_constant(c)?;
        }
        for (f, deps) in &s.functions {
            let deps: Vec<&str> = deps.iter().map(String::as_str).collect();
            ctx.add_function(f, &deps)?;
        }
        let mut assumptions = self.assumptions.clone();
        for (target, value) in &s.rules {
            let t = loop {
                match parse_target(&ctx, target) {
                    Err(DocumentErrorKind::Parse(ParseErrorKind::Undeclared(name))) if s.declare_unknown && !name.contains('_') => {
                        ctx.add_constant(&name)?;
                    }
                    Err(kind) => return Err(SpecializationError::Target(target.clone(), kind)),
                    Ok(t) => break t,
                }
            };
            let v = loop {
                match parse_expr(&ctx, value) {
                    Err(ParseError { kind: ParseErrorKind::Undeclared(name), .. }) if s.declare_unknown && !name.contains('_') => {
                        ctx.add_constant(&name)?;
                    }
                    Err(e) => return Err(SpecializationError::Value(value.clone(), e)),
                    Ok(v) => break v,
                }
            };
            assumptions.push(t, v)?;
        }
        let chart = Chart::new(ctx).expect("dimension unchanged");
        let out = MetricSpec {
            name: self.name.clone(),
            description: self.description.clone(),
            chart,
            components: self.components.clone(),
            assumptions,
        };
        let g = out.reduced_components()?;
        let n = out.chart.dim();
        let m: linalg::Matrix = (1..=n).map(|i| (1..=n).map(|j| g.get(&[i, j]).clone()).collect()).collect();
        if linalg::inverse(&m).is_none() {
            return Err(SpecializationError::Singular);
        }
        Ok(out)
    }
}

/// New declarations plus ordered `target = value` rules.
#[derive(Debug, Clone, Default)]
pub struct Specialization {
    pub constants: Vec<String>,
    pub functions: Vec<(String, Vec<String>)>,
    pub rules: Vec<(String, String)>,
    /// Declare undeclared plain identifiers in rules as constants.
    pub declare_unknown: bool,
}

impl Specialization {
    pub fn new() -> Specialization {
        Specialization::default()
    }

    pub fn constant(mut self, name: &str) -> Self {
        self.constants.push(name.into());
        self
    }

    pub fn function(mut self, name: &str, deps: &[&str]) -> Self {
        self.functions.push((name.into(), deps.iter().map(|d| d.to_string()).collect()));
        self
    }

    pub fn rule(mut self, target: &str, value: &str) -> Self {
        self.rules.push((target.into(), value.into()));
        self
    }

    pub fn declaring_unknown(mut self) -> Self {
        self.declare_unknown = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecializationError {
    #[error(transparent)]
    Decl(#[from] DeclError),
    #[error("bad target `{0}`: {1}")]
    Target(String, DocumentErrorKind),
    #[error("bad value `{0}`: {1}")]
    Value(String, ParseError),
    #[error(transparent)]
    Assumption(#[from] AssumptionError),
    #[error("the specialized metric is singular")]
    Singular,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown metric `{0}` (expected one of prm, gprm, gppw, ppw)")]
pub struct UnknownMetric(pub String);

pub const BUILTIN_NAMES: [&str; 4] = ["prm", "gprm", "gppw", "ppw"];

const PRM: &str = "\
[metadata]
name = prm
description = conformally Ricci flat pure radiation metric
[coords]
u
r
x : positive
y
[constants]
p c G pi
[functions]
w : u x y
[components]
g[1][1] = x*w - p^2*r^2/x^2
g[1][2] = 1
g[1][3] = -2*r/x
g[3][3] = -1/p^2
g[4][4] = -1/p^2
[assumptions]
nonzero: p
";

const GPRM: &str = "\
[metadata]
name = gprm
description = pure radiation type metric
[coords]
u
r
x : positive
y
[constants]
a b c G pi
[functions]
w : u x y
f : x y
[components]
g[1][1] = x*w + a*r^2/x^2
g[1][2] = 1
g[1][3] = b*r/x
g[3][3] = f
g[4][4] = f
[assumptions]
nonzero: f
";

const GPPW: &str = "\
[metadata]
name = gppw
description = generalized pp-wave metric
[coords]
u
r
x : positive
y
[constants]
c G pi
[functions]
h : u x y
F : x y
[components]
g[1][1] = -2*h
g[1][2] = 1
g[3][3] = -F/2
g[4][4] = -F/2
[assumptions]
nonzero: F
";

const PPW: &str = "\
[metadata]
name = ppw
description = pp-wave metric
[coords]
u
r
x : positive
y
[constants]
c G pi
[functions]
h : u x y
[components]
g[1][1] = h
g[1][2] = 1
g[3][3] = 1
g[4][4] = 1
";

/// Document text of a built-in metric.
pub fn builtin_source(name: &str) -> Result<&'static str, UnknownMetric> {
    match name {
        "prm" => Ok(PRM),
        "gprm" => Ok(GPRM),
        "gppw" => Ok(GPPW),
        "ppw" => Ok(PPW),
        other => Err(UnknownMetric(other.to_string())),
    }
}

pub fn builtin(name: &str) -> Result<MetricSpec, UnknownMetric> {
    Ok(load(builtin_source(name)?).expect("built-in documents are valid"))
}
