//! A metric document for hyperbolic 3-space in the upper half-space chart,
//! its Levi-Civita connection and curvature.

use curvlab::catalog;
use curvlab::report;

const HYPERBOLIC: &str = "\
[metadata]
name = h3
description = hyperbolic 3-space
[coords]
x
y
z : positive
[components]
g[1][1] = 1/z^2
g[2][2] = 1/z^2
g[3][3] = 1/z^2
";

fn main() {
    let spec = catalog::load(HYPERBOLIC).unwrap();
    let m = spec.metric().unwrap();
    for name in ["g", "inverse", "christoffel", "riemann", "ricci", "scalar"] {
        println!("-- {name}");
        for line in report::components(&m, name).unwrap().lines() {
            println!("{line}");
        }
    }
    // constant curvature: R = k/2 g∧g, so the Weyl and concircular tensors vanish
    for name in ["conformal", "concircular"] {
        println!("-- {name}");
        for line in report::components(&m, name).unwrap().lines() {
            println!("{line}");
        }
    }
    println!("-- serialized");
    print!("{}", catalog::serialize(&spec));
}
