//! Acceptance suite: one line per criterion, every expected value pinned
//! in `norm0::selftest`.

use norm0::selftest::run_acceptance;
use norm0::DEFAULT_CLOSURE_BUDGET;

#[test]
fn acceptance_criteria() {
    let results = run_acceptance(DEFAULT_CLOSURE_BUDGET);
    assert_eq!(results.len(), 12);
    let mut failed = 0;
    for (i, r) in results.iter().enumerate() {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("{status} [{:2}] {}: {}", i + 1, r.name, r.detail);
        if !r.passed {
            failed += 1;
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
