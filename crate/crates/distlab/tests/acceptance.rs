//! The acceptance suite: one line of output per criterion, all must pass.

use distlab::verify::{run_acceptance, SuiteOptions};

#[test]
fn acceptance_criteria() {
    let results = run_acceptance(SuiteOptions::default());
    let mut all = true;
    for r in &results {
        println!(
            "criterion {:>2} [{}] {} — {}",
            r.id,
            if r.pass { "PASS" } else { "FAIL" },
            r.anchor,
            r.detail
        );
        all &= r.pass;
    }
    assert!(all, "acceptance criteria failed");
}
