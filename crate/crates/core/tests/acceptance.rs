//! End-to-end acceptance run: one line per criterion, then a single
//! assertion over all of them.

use reslat_core::corpus::{run_criterion, CRITERIA};

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for id in 1..=CRITERIA.len() {
        let out = run_criterion(id).unwrap_or_else(|e| panic!("criterion {id} errored: {e}"));
        let bound = out.limit_ms.map_or(String::new(), |l| format!(" / {l} ms"));
        println!(
            "criterion {:>2} {:<36} {} ({} ms{bound}) {}",
            out.id,
            out.name,
            if out.passed { "PASS" } else { "FAIL" },
            out.elapsed_ms,
            out.detail
        );
        if !out.passed {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
