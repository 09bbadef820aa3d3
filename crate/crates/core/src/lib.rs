pub mod catalog;
pub mod classify;
pub mod curvature;
pub mod expr;
pub mod geometry;
pub mod linalg;
pub mod report;
