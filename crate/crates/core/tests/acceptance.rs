//! One test per acceptance criterion. Each prints a single pass/fail line.

use rorg::acceptance::run_criterion;

fn criterion(id: u8) {
    let report = run_criterion(id);
    println!("{report}");
    assert!(report.passed, "{report}");
}

#[test]
fn criterion_01_free_groups() {
    criterion(1);
}

#[test]
fn criterion_02_general_linear() {
    criterion(2);
}

#[test]
fn criterion_03_basis_conjugating() {
    criterion(3);
}

#[test]
fn criterion_04_edge_plus_point() {
    criterion(4);
}

#[test]
fn criterion_05_central_chain() {
    criterion(5);
}

#[test]
fn criterion_06_choice_independence() {
    criterion(6);
}

#[test]
fn criterion_07_invariance_oracle() {
    criterion(7);
}

#[test]
fn criterion_08_witness_suite() {
    criterion(8);
}

#[test]
fn criterion_09_normal_form_oracle() {
    criterion(9);
}

#[test]
fn criterion_10_termination() {
    criterion(10);
}
