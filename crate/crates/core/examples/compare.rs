//! Side by side verdicts for the pure radiation metric and the pp-wave.

use curvlab::{catalog, classify, report};

fn main() {
    let prm = catalog::builtin("prm").unwrap().metric().unwrap();
    let ppw = catalog::builtin("ppw").unwrap().metric().unwrap();
    let c = classify::compare(&prm, "prm", &ppw, "ppw").unwrap();
    for line in report::comparison_lines(&c) {
        println!("{line}");
    }
}
