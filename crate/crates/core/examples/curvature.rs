//! Curvature tables of the pure radiation metric and a few operator
//! identities: R·R = 0, Q(S,R) = 0 and P·P + Q(S,P)/3 = 0.

use curvlab::catalog;
use curvlab::curvature::{self, DerivedKind};
use curvlab::report;

fn main() {
    let m = catalog::builtin("prm").unwrap().metric().unwrap();
    for name in ["riemann", "ricci", "scalar", "conformal", "projective", "stress-energy"] {
        println!("-- {name}");
        for line in report::components(&m, name).unwrap().lines() {
            println!("{line}");
        }
    }

    let r = m.riemann();
    let s = m.ricci();
    let p = curvature::derived(&m, DerivedKind::Projective);
    let rr = curvature::dot_action(&m, r, r).unwrap();
    let qsr = curvature::q_operator(&m, s, r).unwrap();
    let pp = curvature::dot_action(&m, &p, &p).unwrap();
    let qsp = curvature::q_operator(&m, s, &p).unwrap();
    let combo = m.reduce_tensor(&pp.add(&qsp.scale(&curvlab::expr::Expr::rational(1, 3))).unwrap());
    println!("-- identities");
    println!("R.R = 0: {}", rr.is_zero());
    println!("Q(S,R) = 0: {}", qsr.is_zero());
    println!("P.P = 0: {}", pp.is_zero());
    println!("P.P + Q(S,P)/3 = 0: {}", combo.is_zero());
    let div = curvature::divergence(&m, r, 1).unwrap();
    if let Some((i, e)) = div.first_nonzero() {
        println!("div R {i:?} = {e}");
    }
}
