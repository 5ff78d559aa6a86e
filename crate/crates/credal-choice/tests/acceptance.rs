//! Acceptance gate: one test per battery, printing one pass/fail line each.
//! Budgets match the shipped defaults (seed 1, 500 trials); the three
//! batteries with wall-clock budgets assert them from the suite report.

use credal_choice::verify::{run_verify_suite_filtered, SuiteConfig};

fn run(battery: &str, criterion: usize, label: &str, budget_ms: Option<u128>) {
    let cfg = SuiteConfig::default();
    let report = match run_verify_suite_filtered(&cfg, Some(battery)) {
        Ok(r) => r,
        Err(e) => {
            println!("criterion {criterion} ({label}): FAIL — {e}");
            panic!("criterion {criterion} ({label}) errored: {e}");
        }
    };
    let outcome = &report.batteries[0];
    let pass = outcome.passed() && budget_ms.map_or(true, |b| report.runtime_ms < b);
    println!(
        "criterion {criterion} ({label}): {} — {} cases, {} failures, {} ms",
        if pass { "pass" } else { "FAIL" },
        outcome.cases,
        outcome.failures,
        report.runtime_ms
    );
    assert!(
        outcome.passed(),
        "criterion {criterion} ({label}): {} of {} cases failed; first: {:?}",
        outcome.failures,
        outcome.cases,
        outcome.first_counterexample
    );
    if let Some(b) = budget_ms {
        assert!(
            report.runtime_ms < b,
            "criterion {criterion} ({label}): runtime {} ms exceeds budget {} ms",
            report.runtime_ms,
            b
        );
    }
}

#[test]
fn acceptance_01_linear_event_agreement() {
    run("theorem3", 1, "linear event-level vs classical", Some(10_000));
}

#[test]
fn acceptance_02_credal_route_agreement() {
    run("theorem5", 2, "credal direct vs characterization", Some(30_000));
}

#[test]
fn acceptance_03_complementation() {
    run("complementation", 3, "complement invariance", None);
}

#[test]
fn acceptance_04_precise_collapse() {
    run("precise-collapse", 4, "criteria coincide on linear models", None);
}

#[test]
fn acceptance_05_mixing() {
    run("mixing", 5, "mixing falsifier", None);
}

#[test]
fn acceptance_06_coherence() {
    run("coherence", 6, "K0-K4 instance checks", None);
}

#[test]
fn acceptance_07_variable_level() {
    run("variables", 7, "exact vs sampled variable verdicts", Some(60_000));
}

#[test]
fn acceptance_08_corollary() {
    run("corollary", 8, "marginalization clauses", None);
}

#[test]
fn acceptance_09_lp_backend() {
    run("lp-backend", 9, "vertex vs constraint envelopes", None);
}

#[test]
fn acceptance_10_lp_properties() {
    run("lp-properties", 10, "lower prevision properties", None);
}
