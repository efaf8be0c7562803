//! Acceptance suite: runs every criterion of the catalog at its registered
//! configuration and tolerance, printing one verdict line per report.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use rbm_core::accept;

fn run_criterion(id: &str) {
    let reports = accept::run_suite(id).expect("criterion execution");
    let mut all = true;
    for r in &reports {
        println!("{}", r.verdict_line());
        all &= r.pass;
    }
    let failing: Vec<&str> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.name.as_str())
        .collect();
    assert!(all, "failing checks: {failing:?}");
}

#[test]
fn criterion_01_covariation_bracket() {
    run_criterion("covariation");
}

#[test]
fn criterion_02_dirichlet_energy() {
    run_criterion("energy");
}

#[test]
fn criterion_03_spectral_inequalities() {
    run_criterion("spectral");
}

#[test]
fn criterion_04_myopic_marginal_vs_reflected_oracle() {
    run_criterion("myopic-marginal");
}

#[test]
fn criterion_05_survival_oracle_agreement() {
    run_criterion("survival");
}

#[test]
fn criterion_06_occupation_lebesgue_disk() {
    run_criterion("occupation-disk");
}

#[test]
fn criterion_07_cross_scheme_speed_consistency() {
    run_criterion("cross-scheme");
}

#[test]
fn criterion_08_comb_counterexample() {
    run_criterion("counterexample");
}

#[test]
fn criterion_09_time_reversal_stationarity() {
    run_criterion("time-reversal");
}

#[test]
fn criterion_10_submartingale_drift_bound() {
    run_criterion("submartingale");
}

#[test]
fn criterion_11_generator_consistency() {
    run_criterion("generator");
}
