//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with --nocapture) and asserting every check in the suite.

use symkl::suites;

fn run(name: &str, rep: suites::SuiteReport) {
    let pass = rep.pass();
    println!(
        "{} criterion {}: {} checks",
        if pass { "PASS" } else { "FAIL" },
        name,
        rep.lines.len()
    );
    for line in rep.lines.iter().filter(|l| !l.pass) {
        println!("  FAIL {}: {}", line.name, line.detail);
    }
    assert!(pass, "criterion {} failed", name);
}

#[test]
fn criterion_01_mseries_three_way_agreement() {
    let start = std::time::Instant::now();
    run("1 (m-series)", suites::mseries(5, 8).unwrap());
    assert!(
        start.elapsed().as_secs() < 30,
        "criterion 1 exceeded its 30 s runtime bound"
    );
}

#[test]
fn criterion_02_factorization_identity() {
    run("2 (factorization)", suites::factorization().unwrap());
}

#[test]
fn criterion_03_anchor_value() {
    run("3 (anchor)", suites::anchor().unwrap());
}

#[test]
fn criterion_04_purity() {
    run("4 (purity)", suites::purity().unwrap());
}

#[test]
fn criterion_05_table_invariants() {
    run("5 (tables)", suites::tables(1 << 10, 4).unwrap());
}

#[test]
fn criterion_06_appendix_dimensions() {
    run("6 (repdims)", suites::repdims().unwrap());
}

#[test]
fn criterion_07_census() {
    run("7 (census)", suites::census().unwrap());
}

#[test]
fn criterion_08_congruence() {
    run("8 (congruence)", suites::congruence().unwrap());
}

#[test]
fn criterion_09_padic_desk_evidence() {
    run("9 (padic)", suites::padic().unwrap());
}

#[test]
fn criterion_10_determinant_validation() {
    run("10 (determinant)", suites::determinant().unwrap());
}
