//! One test per acceptance criterion. Each prints a single PASS/FAIL line
//! (run with `--nocapture` to see them). A lock serializes the checks so
//! their runtime budgets are measured without competing test threads.

use hetcv_core::validation::run;
use std::sync::Mutex;

static SERIAL: Mutex<()> = Mutex::new(());

fn criterion(id: u8) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let out = run(id);
    println!("{}", out.line());
    assert!(out.passed, "{}", out.line());
}

#[test]
fn criterion_01_support_endpoints() {
    criterion(1);
}

#[test]
fn criterion_02_cv_reduction() {
    criterion(2);
}

#[test]
fn criterion_03_laplace_consistency() {
    criterion(3);
}

#[test]
fn criterion_04_normalization() {
    criterion(4);
}

#[test]
fn criterion_05_complete_monotonicity() {
    criterion(5);
}

#[test]
fn criterion_06_ode_residual() {
    criterion(6);
}

#[test]
fn criterion_07_msd_crossover() {
    criterion(7);
}

#[test]
fn criterion_08_telegrapher_monte_carlo() {
    criterion(8);
}

#[test]
fn criterion_09_hd_msd() {
    criterion(9);
}

#[test]
fn criterion_10_ergodicity_breaking() {
    criterion(10);
}

#[test]
fn criterion_11_voter_round_trip() {
    criterion(11);
}

#[test]
fn criterion_12_prabhakar_pair() {
    criterion(12);
}
