//! Charts, tensors and the Levi-Civita pipeline.
//!
//! All indices are 1-based. The curvature tensor is stored as
//! `R(X1,X2,X3,X4) = g(R(X1,X2)X3, X4)` with the sign fixed by
//! [`CURVATURE_SIGN`]; the Ricci tensor contracts slots 1 and 4.

mod chart;
mod metric;
mod tensor;

pub use chart::{Chart, ChartError};
pub use metric::{CurvatureSign, GeometryError, Metric, CURVATURE_SIGN};
pub use tensor::{ShapeError, Slot, Symmetry, Tensor};
