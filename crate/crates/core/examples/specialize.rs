//! Specializations of the generalized pure radiation metric: back to the
//! pure radiation metric, to a pp-wave, and to a perfect fluid.

use curvlab::catalog::{self, Specialization};
use curvlab::classify::{self, Workspace};

fn show(title: &str, s: Specialization, props: &[&str]) {
    let spec = catalog::builtin("gprm").unwrap().specialize(&s).unwrap();
    let m = spec.metric().unwrap();
    let r = classify::classify(&m, title, Some(props)).unwrap();
    println!("-- {title}");
    for v in &r.verdicts {
        println!("{}", v.summary());
    }
}

fn main() {
    // a = -p^2, b = -2, f = -1/p^2 recovers the pure radiation metric
    let s = Specialization::new().constant("p").rule("a", "-p^2").rule("b", "-2").rule("f", "-1/p^2");
    let spec = catalog::builtin("gprm").unwrap().specialize(&s).unwrap();
    let m = spec.metric().unwrap();
    let ws = Workspace::new(&m);
    println!("-- gprm at a = -p^2, b = -2, f = -1/p^2");
    println!("S[1][1] = {}", ws.tensor("S").unwrap().get(&[1, 1]));

    show("a = b = 0", Specialization::new().rule("a", "0").rule("b", "0"), &["generalized_pp_wave"]);
    show("f = 1/a, b = -2", Specialization::new().rule("f", "1/a").rule("b", "-2"), &["stress_energy", "semisymmetric"]);
    show(
        "b = -2, f = k",
        Specialization::new().constant("k").rule("b", "-2").rule("f", "k"),
        &["R.R~Q(S,R)", "venzi_R"],
    );
    show(
        "a = 0, b = -2, f = exp(x^3/3) x^(-2/3), w = uxy",
        Specialization::new().rule("a", "0").rule("b", "-2").rule("f", "exp(x^3/3)*x^(-2/3)").rule("w", "u*x*y"),
        &["stress_energy", "quasi_einstein_level", "ein_level"],
    );
}
