//! Acceptance suite: one test per numbered criterion, each printing a single
//! PASS/FAIL line followed by its individual checks.

use std::time::{Duration, Instant};

use exponentia::verify::{determinism, CriterionReport, Suite, VerifyConfig};

fn report(r: &CriterionReport, elapsed: Duration) {
    println!("{}  ({:.1} s)", r.summary_line(), elapsed.as_secs_f64());
    for c in &r.checks {
        println!(
            "    {} {}: value {:e}, target {:e}, {:?} tolerance {:e}",
            if c.pass { "ok  " } else { "FAIL" },
            c.label,
            c.value,
            c.target,
            c.mode,
            c.tolerance
        );
    }
    if let Some(e) = &r.error {
        println!("    error: {e}");
    }
}

fn run(id: u8) -> (CriterionReport, Duration) {
    let start = Instant::now();
    let suite = Suite::new(VerifyConfig::default()).expect("default configuration is valid");
    let r = suite.criterion(id);
    let elapsed = start.elapsed();
    report(&r, elapsed);
    (r, elapsed)
}

fn assert_criterion(id: u8) {
    let (r, _) = run(id);
    assert!(r.pass, "criterion {id} failed: {r:#?}");
}

#[test]
fn criterion_01_awgn_first_order() {
    let (r, elapsed) = run(1);
    assert!(r.pass, "{r:#?}");
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
}

#[test]
fn criterion_02_awgn_second_order() {
    assert_criterion(2);
}

#[test]
fn criterion_03_rho_star() {
    assert_criterion(3);
}

#[test]
fn criterion_04_upper_bound_battery() {
    assert_criterion(4);
}

#[test]
fn criterion_05_second_order_eo() {
    assert_criterion(5);
}

#[test]
fn criterion_06_constraint_forms() {
    assert_criterion(6);
}

#[test]
fn criterion_07_kuhn_tucker() {
    assert_criterion(7);
}

#[test]
fn criterion_08_spectral_efficiency() {
    assert_criterion(8);
}

#[test]
fn criterion_09_fading_closed_forms() {
    assert_criterion(9);
}

#[test]
fn criterion_10_fading_convergence() {
    let (r, elapsed) = run(10);
    assert!(r.pass, "{r:#?}");
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
}

#[test]
fn criterion_11_fading_slopes() {
    assert_criterion(11);
}

#[test]
fn criterion_12_oracles() {
    assert_criterion(12);
}

#[test]
fn criterion_13_determinism() {
    let start = Instant::now();
    let r = determinism(VerifyConfig::default(), &[1, 4]);
    report(&r, start.elapsed());
    assert!(r.pass, "{r:#?}");
}
