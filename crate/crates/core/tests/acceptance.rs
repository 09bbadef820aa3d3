//! Acceptance run: one PASS/FAIL line per criterion, then the details of
//! every failing check. Tolerances live in `common::criteria`.

mod common;

use common::criteria::*;

fn criteria() -> Vec<(&'static str, fn() -> Vec<Item>)> {
    vec![
        ("prm component tables", prm_tables_items),
        ("prm classification checklist", prm_checklist),
        ("prm stress-energy conditions", prm_stress_energy),
        ("gprm component tables", gprm_tables_items),
        ("gprm quasi-Einstein structure", gprm_quasi_einstein),
        ("gprm special cases", gprm_special_cases),
        ("gprm worked examples", gprm_examples),
        ("specialization coherence", specialization_coherence),
        ("structural identities and numeric cross-check", property_suites),
        ("prm versus ppw comparison", comparison),
    ]
}

#[test]
fn acceptance() {
    let mut failures = Vec::new();
    for (n, (label, run)) in criteria().into_iter().enumerate() {
        let items = run();
        let bad: Vec<&Item> = items.iter().filter(|i| !i.ok()).collect();
        let mark = if bad.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {}: {mark} ({label}, {}/{} checks)", n + 1, items.len() - bad.len(), items.len());
        for i in bad {
            let mut e = i.result.clone().unwrap_err();
            if e.len() > 240 {
                e = format!("{}... ({} chars)", &e[..e.floor_char_boundary(240)], e.len());
            }
            failures.push(format!("criterion {} / {}: {e}", n + 1, i.name));
        }
    }
    for f in &failures {
        println!("  {f}");
    }
    assert!(failures.is_empty(), "{} failing checks", failures.len());
}
