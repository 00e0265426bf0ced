use std::process::Command;

use geoharmonic_cli::acceptance::{run_criteria, Criterion};
use geoharmonic_cli::config::DEFAULT_SEED;

fn selftest_csv(path: &std::path::Path) -> (bool, Vec<u8>) {
    let status = Command::new(env!("CARGO_BIN_EXE_geoharmonic"))
        .args(["selftest", "--seed", &DEFAULT_SEED.to_string(), "--out"])
        .arg(path)
        .output()
        .expect("selftest binary runs");
    (status.status.success(), std::fs::read(path).expect("selftest wrote its csv"))
}

// Runs without the test harness so the criterion lines always reach the output,
// and sequentially so the timed criteria never compete for cores.
fn main() {
    let criteria = run_criteria(DEFAULT_SEED).expect("criteria run");
    for c in &criteria {
        println!("{}", c.summary());
    }

    let dir = tempfile::tempdir().unwrap();
    let (ok_a, first) = selftest_csv(&dir.path().join("a.csv"));
    let (ok_b, second) = selftest_csv(&dir.path().join("b.csv"));
    let identical = first == second && !first.is_empty();
    println!(
        "criterion 10: {} two selftest runs with seed {} give byte-identical CSV ({} bytes, exit ok: {} {})",
        if identical && ok_a && ok_b { "PASS" } else { "FAIL" },
        DEFAULT_SEED,
        first.len(),
        ok_a,
        ok_b
    );

    let failed: Vec<u32> = criteria.iter().filter(|c| !c.passed()).map(|c: &Criterion| c.id).collect();
    if !failed.is_empty() || !(identical && ok_a && ok_b) {
        eprintln!("acceptance failed: criteria {failed:?}, reproducibility {identical}");
        std::process::exit(1);
    }
}
