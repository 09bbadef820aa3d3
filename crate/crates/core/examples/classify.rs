//! Full classification battery for a built-in metric (default `prm`).
//!
//! `cargo run --release --example classify -- gprm`

use curvlab::{catalog, classify};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "prm".into());
    let spec = catalog::builtin(&name).unwrap();
    let m = spec.metric().unwrap();
    let report = classify::classify(&m, &name, None).unwrap();
    for v in &report.verdicts {
        println!("{}", v.summary());
        for n in &v.notes {
            println!("    {n}");
        }
    }
    for c in &report.cross_references {
        println!("{} => {}: {}", c.premise, c.conclusion, if c.consistent { "consistent" } else { "INCONSISTENT" });
    }
}
