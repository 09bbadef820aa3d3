//! Curvature of a specialized metric equals the specialized curvature.

mod common;

use common::criteria::*;

#[test]
fn substitution_commutes_with_curvature() {
    assert_items(&specialization_coherence(), |_| true);
}
