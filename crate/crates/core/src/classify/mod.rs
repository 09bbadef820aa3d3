//! Curvature-restricted structures: semisymmetry and pseudosymmetry type
//! relations, Einstein-like conditions, recurrence, weak symmetry,
//! compatibility, Venzi spaces and the form of the stress-energy tensor.
//!
//! All answers are generic: ranks and solvability are computed over the
//! function field, and every division by a non-constant expression that is
//! not known to be nonzero shows up in the verdict's assumptions.

mod report;
mod solve;
mod structures;
mod verdict;
mod workspace;

pub use report::{classify, compare, property_names, ClassificationReport, Comparison, ComparisonRow, CrossReference, Expect};
pub use solve::{known_nonzero, nonzero_condition, Inconsistency, LinearSystem, SolutionSpace};
pub use structures::{
    alpha_candidates, classify_stress_energy, constant_null_covector_check, default_covectors, derivative_class, ein_level,
    factor_rank_one, find_linear_relation, generalized_recurrence, is_compatible, one_forms_recurrence, quasi_einstein_level,
    recurrence, semisymmetry_check, solve_compatibility, solve_venzi, solve_weak_symmetry, super_generalized_recurrence,
    two_forms_recurrence, CompatibilityMode, WeakKind,
};
pub use verdict::{Certificate, CovectorReport, PropertyVerdict, Status, StressEnergy, Witness};
pub use workspace::{Workspace, TENSOR_NAMES};

use crate::curvature::CurvatureError;
use crate::geometry::ShapeError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("unknown tensor `{0}`")]
    UnknownTensor(String),
    #[error("unknown property `{0}`")]
    UnknownProperty(String),
    #[error("a linear relation needs at least two tensors, got {0}")]
    Arity(usize),
}
