//! Acceptance criteria 1–12 at their stated tolerances. Each test prints one
//! pass/fail line; run with `--nocapture` to see them.

use spintomo_core::selftest::{run_criterion, run_selftest, SelftestConfig};

fn check(id: u8) {
    let r = run_criterion(id, &SelftestConfig::default()).expect("known criterion");
    println!("{}", r.line());
    assert!(r.passed, "{}", r.line());
}

#[test]
fn criterion_01_frame_completeness_and_normalization() {
    check(1);
}

#[test]
fn criterion_02_two_qubit_reconstruction() {
    check(2);
}

#[test]
fn criterion_03_qudit_reconstruction() {
    check(3);
}

#[test]
fn criterion_04_werner_qudit_closed_forms() {
    check(4);
}

#[test]
fn criterion_05_kernel_intertwining() {
    check(5);
}

#[test]
fn criterion_06_closed_form_kernel_cross_check() {
    check(6);
}

#[test]
fn criterion_07_correlation_equivalence() {
    check(7);
}

#[test]
fn criterion_08_werner_correlations() {
    check(8);
}

#[test]
fn criterion_09_bell_bounds() {
    check(9);
}

#[test]
fn criterion_10_steering_report() {
    check(10);
}

#[test]
fn criterion_11_no_signaling_and_third_angle() {
    check(11);
}

#[test]
fn criterion_12_full_selftest_wall_clock() {
    let report = run_selftest(&SelftestConfig::default());
    for c in &report.criteria {
        println!("  {}", c.line());
    }
    let total = report
        .criteria
        .iter()
        .find(|c| c.id == 12)
        .expect("criterion 12");
    println!("{}", total.line());
    assert!(total.passed, "{}", total.line());
    assert!(report.passed);
}
