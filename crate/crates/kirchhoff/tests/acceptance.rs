//! Acceptance suite: runs every verification criterion of the battery at its
//! pinned tolerance and prints one pass/fail line per criterion.
//!
//! ```text
//! cargo test --test acceptance -- --nocapture
//! ```
//!
//! The same battery is available at runtime as `kirchhoff verify`.

use kirchhoff::verify;

fn run(id: &str) {
    let out = verify::run_check(id, 42).expect("check should execute");
    println!(
        "[{}] {} {}: {}",
        if out.passed { "PASS" } else { "FAIL" },
        out.id,
        out.name,
        out.detail
    );
    assert!(out.passed, "{} ({}) failed: {}", out.id, out.name, out.detail);
}

#[test]
fn c01_ground_state_shooting_vs_closed_form() {
    run("C1");
}

#[test]
fn c02_pohozaev_residuals_and_refinement() {
    run("C2");
}

#[test]
fn c03_gagliardo_nirenberg_sharpness() {
    run("C3");
}

#[test]
fn c04_free_problem_existence_trichotomy() {
    run("C4");
}

#[test]
fn c05_sobolev_constant_r4() {
    run("C5");
}

#[test]
fn c06_critical_nonexistence() {
    run("C6");
}

#[test]
fn c07_trapped_existence_incl_critical_boundary() {
    run("C7");
}

#[test]
fn c08_blowup_scaling_laws_and_concentration() {
    run("C8");
}

#[test]
fn c09_subcritical_sweep_convergence() {
    run("C9");
}

#[test]
fn c10_brute_force_equivalence() {
    run("C10");
}

#[test]
fn c11_gradient_consistency_and_mass() {
    run("C11");
}
