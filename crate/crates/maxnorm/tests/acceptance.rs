//! Full self-test suite as a single integration target. Prints one line
//! per criterion so a failing run shows exactly which capability broke.

use maxnorm::acceptance;

#[test]
fn acceptance_suite() {
    let summary = acceptance::run_all();
    println!();
    println!("{:>2}  {:<6}  {:<42}  {}", "id", "status", "criterion", "detail");
    for r in &summary.results {
        println!(
            "{:>2}  {:<6}  {:<42}  {}",
            r.id,
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        );
    }
    println!();
    let failed: Vec<&str> = summary
        .results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.name.as_str())
        .collect();
    assert!(
        summary.all_passed,
        "acceptance criteria failed: {}",
        failed.join(", ")
    );
}
