use std::fmt;

use super::solve::{nonzero_condition, Inconsistency, SolutionSpace};
use crate::expr::Expr;
use crate::geometry::{Metric, Tensor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Holds,
    HoldsUnderAssumptions,
    Fails,
    Vacuous,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::HoldsUnderAssumptions => "holds-under-assumptions",
            Status::Fails => "fails",
            Status::Vacuous => "vacuous",
        }
    }

    /// Holds, possibly under recorded assumptions.
    pub fn holds(self) -> bool {
        matches!(self, Status::Holds | Status::HoldsUnderAssumptions)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A nonzero residual entry refuting a property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub index: Vec<usize>,
    pub residual: Expr,
}

/// `T = p g + σ η⊗η` and friends; `norm` is `g(η,η)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StressEnergy {
    Vacuum,
    PureRadiation { rho: Expr, eta: Vec<Expr>, norm: Expr },
    PerfectFluid { pressure: Expr, sigma: Expr, eta: Vec<Expr>, norm: Expr },
    /// `T = α g + β1 e1⊗e1 + β3 e3⊗e3 + β4 e4⊗e4 + σ1 (e1⊗e3 + e3⊗e1) + σ2 (e3⊗e4 + e4⊗e3)`
    /// over the coordinate covectors; `remainder` lists entries of `T - α g`
    /// outside that frame.
    General { alpha: Expr, beta: [Expr; 3], sigma: [Expr; 2], remainder: Vec<(Vec<usize>, Expr)> },
}

impl StressEnergy {
    pub fn kind(&self) -> &'static str {
        match self {
            StressEnergy::Vacuum => "vacuum",
            StressEnergy::PureRadiation { .. } => "pure_radiation",
            StressEnergy::PerfectFluid { .. } => "perfect_fluid",
            StressEnergy::General { .. } => "general",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CovectorReport {
    pub label: String,
    pub components: Vec<Expr>,
    pub norm: Expr,
    /// Nonzero entries `(∇ξ)(∂i, ∂m)`, derivative index last.
    pub nabla: Vec<(Vec<usize>, Expr)>,
}

impl CovectorReport {
    pub fn is_null(&self) -> bool {
        self.norm.is_zero()
    }

    pub fn is_parallel(&self) -> bool {
        self.nabla.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    None,
    Solution(SolutionSpace),
    /// Basis of scalar tuples `(c1, ..., ck)` with `Σ ci ti = 0`, first
    /// nonzero entry normalized to one.
    Relation { basis: Vec<Vec<Expr>>, constant: bool },
    /// `rank(S - α g) = level`, with the pivot positions of the rank.
    Rank { level: usize, alpha: Expr, generic: usize, pivots: Vec<(usize, usize)> },
    /// `S^d + λ1 S^(d-1) + ... + λd g = 0`.
    MinimalPolynomial { degree: usize, lambdas: Vec<Expr> },
    /// `S = β η⊗η`.
    Simple { beta: Expr, eta: Vec<Expr> },
    StressEnergy(StressEnergy),
    Covectors(Vec<CovectorReport>),
    Scalar(Expr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyVerdict {
    pub name: String,
    pub status: Status,
    pub witness: Witness,
    pub certificate: Option<Certificate>,
    /// Expressions assumed nonzero beyond the metric's own declarations.
    pub assumptions: Vec<Expr>,
    pub notes: Vec<String>,
}

impl PropertyVerdict {
    pub fn new(name: impl Into<String>, status: Status) -> PropertyVerdict {
        PropertyVerdict {
            name: name.into(),
            status,
            witness: Witness::None,
            certificate: None,
            assumptions: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = w;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn holds(&self) -> bool {
        self.status.holds()
    }

    /// Holds iff `t` vanishes; otherwise the first nonzero entry is the certificate.
    pub fn zero_check(name: impl Into<String>, t: &Tensor) -> PropertyVerdict {
        match t.first_nonzero() {
            None => PropertyVerdict::new(name, Status::Holds),
            Some((index, residual)) => PropertyVerdict {
                certificate: Some(Certificate { index, residual }),
                ..PropertyVerdict::new(name, Status::Fails)
            },
        }
    }

    /// Sets the status from the extra assumptions: `Holds` when none are needed.
    pub(crate) fn assuming(mut self, m: &Metric, pivots: &[Expr]) -> Self {
        for p in pivots {
            if let Some(c) = nonzero_condition(m, p) {
                if !self.assumptions.contains(&c) {
                    self.assumptions.push(c);
                }
            }
        }
        if self.status == Status::Holds && !self.assumptions.is_empty() {
            self.status = Status::HoldsUnderAssumptions;
        }
        self
    }

    /// Verdict for an inhomogeneous system: holds iff it is solvable.
    pub(crate) fn from_solution(m: &Metric, name: impl Into<String>, r: Result<SolutionSpace, Inconsistency>) -> Self {
        match r {
            Ok(s) => {
                let pivots = s.pivots.clone();
                PropertyVerdict::new(name, Status::Holds).with_witness(Witness::Solution(s)).assuming(m, &pivots)
            }
            Err(e) => {
                let v = PropertyVerdict {
                    certificate: Some(Certificate { index: e.label, residual: e.residual }),
                    ..PropertyVerdict::new(name, Status::Fails)
                };
                v.assuming(m, &e.pivots)
            }
        }
    }

    pub fn solution(&self) -> Option<&SolutionSpace> {
        match &self.witness {
            Witness::Solution(s) => Some(s),
            _ => None,
        }
    }

    /// One-line summary such as `venzi_R: holds (span {1,0,0,0})`.
    pub fn summary(&self) -> String {
        // Level-valued and kind-valued properties print the value in place of the status.
        let head = match &self.witness {
            Witness::Rank { level, .. } if self.name.ends_with("_level") => level.to_string(),
            Witness::MinimalPolynomial { degree, .. } if self.name.ends_with("_level") => degree.to_string(),
            Witness::StressEnergy(se) => se.kind().to_string(),
            _ => self.status.to_string(),
        };
        let mut s = format!("{}: {}", self.name, head);
        let detail = match &self.witness {
            Witness::Solution(sol) if sol.unknowns.len() <= 4 && sol.dimension() == 1 && sol.particular.iter().all(Expr::is_zero) => {
                Some(format!("span {{{}}}", join(&sol.basis[0])))
            }
            Witness::Solution(sol) => Some(format!("{} unknowns, {} free", sol.unknowns.len(), sol.dimension())),
            Witness::Relation { basis, .. } if !basis.is_empty() => Some(format!("coefficients ({})", join(&basis[0]))),
            Witness::Rank { alpha, .. } if self.name.ends_with("_level") => Some(format!("alpha = {alpha}")),
            Witness::Rank { level, alpha, .. } => Some(format!("level {level}, alpha = {alpha}")),
            Witness::MinimalPolynomial { .. } if self.name.ends_with("_level") => None,
            Witness::MinimalPolynomial { degree, .. } => Some(format!("degree {degree}")),
            Witness::Simple { beta, eta } => Some(format!("beta = {beta}, eta = {{{}}}", join(eta))),
            Witness::Scalar(e) => Some(e.to_string()),
            Witness::StressEnergy(StressEnergy::PureRadiation { rho, eta, .. }) => Some(format!("rho = {rho}, eta = {{{}}}", join(eta))),
            Witness::StressEnergy(StressEnergy::PerfectFluid { pressure, sigma, eta, .. }) => {
                Some(format!("p = {pressure}, sigma = {sigma}, eta = {{{}}}", join(eta)))
            }
            _ => None,
        };
        if let Some(d) = detail {
            s.push_str(&format!(" ({d})"));
        }
        if let Some(c) = &self.certificate {
            let idx: Vec<String> = c.index.iter().map(usize::to_string).collect();
            s.push_str(&format!(" [{}] = {}", idx.join(","), c.residual));
        }
        if !self.assumptions.is_empty() {
            let a: Vec<String> = self.assumptions.iter().map(|e| format!("{e} != 0")).collect();
            s.push_str(&format!(" assuming {}", a.join(", ")));
        }
        s
    }
}

fn join(v: &[Expr]) -> String {
    v.iter().map(Expr::to_string).collect::<Vec<_>>().join(",")
}
