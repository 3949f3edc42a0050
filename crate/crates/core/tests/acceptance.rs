//! Acceptance suite: runs every verification suite at its contract
//! size and budget, printing one pass/fail line per criterion.

use std::time::Duration;

use gcalc_core::verify::{run_all, run_suite, SuiteOutcome};

const SEED: u64 = 0x5EED;

fn report(criterion: &str, outcome: &SuiteOutcome, budget: Option<Duration>) {
    let ok = outcome.passed() && budget.map(|b| outcome.wall <= b).unwrap_or(true);
    println!(
        "{} — {criterion}: {} checks, {} failures, {:.3}s{}",
        if ok { "PASS" } else { "FAIL" },
        outcome.cases,
        outcome.failures.len(),
        outcome.wall.as_secs_f64(),
        budget
            .map(|b| format!(" (budget {:.0}s)", b.as_secs_f64()))
            .unwrap_or_default(),
    );
    for f in outcome.failures.iter().take(5) {
        println!("    {f}");
    }
}

fn run(name: &str) -> SuiteOutcome {
    run_suite(name, SEED).expect("known suite")
}

#[test]
fn criterion_01_ultrametric() {
    let o = run("ultrametric");
    report(
        "criterion 1: ultrametric inequality on 1000 random triples",
        &o,
        Some(Duration::from_secs(1)),
    );
    assert!(o.passed(), "{:?}", o.failures);
    assert!(o.wall <= Duration::from_secs(1), "took {:?}", o.wall);
}

#[test]
fn criterion_02_norm_laws() {
    let o = run("corollary-norm");
    report("criterion 2: sharp-norm laws on 500 random instances", &o, None);
    assert!(o.passed(), "{:?}", o.failures);
}

#[test]
fn criterion_03_derivative_laws() {
    let o = run("deriv-laws");
    report(
        "criterion 3: Leibniz/chain/linearity/quotient on 200 pairs",
        &o,
        Some(Duration::from_secs(5)),
    );
    assert!(o.passed(), "{:?}", o.failures);
    assert!(o.wall <= Duration::from_secs(5), "took {:?}", o.wall);
}

#[test]
fn criterion_04_almost_constant() {
    let o = run("example-deriv5");
    report(
        "criterion 4: almost-constant derivative at 50 base points",
        &o,
        None,
    );
    assert!(o.passed(), "{:?}", o.failures);
}

#[test]
fn criterion_05_ftc() {
    let o = run("ftc");
    report(
        "criterion 5: fundamental theorem on 100 random polynomials",
        &o,
        Some(Duration::from_secs(10)),
    );
    assert!(o.passed(), "{:?}", o.failures);
    assert!(o.wall <= Duration::from_secs(10), "took {:?}", o.wall);
}

#[test]
fn criterion_06_series() {
    let o = run("series");
    report(
        "criterion 6: series convergence/derivative/coefficient laws",
        &o,
        None,
    );
    assert!(o.passed(), "{:?}", o.failures);
}

#[test]
fn criterion_07_embedding() {
    let o = run("embedding");
    report(
        "criterion 7: embedding homomorphism and derivative commutation",
        &o,
        None,
    );
    assert!(o.passed(), "{:?}", o.failures);
}

#[test]
fn criterion_08_zero_characterization() {
    let o = run("caracter-forward");
    report(
        "criterion 8: forward zero characterization, well-definedness",
        &o,
        None,
    );
    assert!(o.passed(), "{:?}", o.failures);
}

#[test]
fn criterion_09_net_crossval() {
    let o = run("net-crossval");
    report(
        "criterion 9: net valuation estimates within 0.05 on 500 cases",
        &o,
        Some(Duration::from_secs(2)),
    );
    assert!(o.passed(), "{:?}", o.failures);
    assert!(o.wall <= Duration::from_secs(2), "took {:?}", o.wall);
}

#[test]
fn criterion_10_cauchy_schwarz() {
    let o = run("cauchy-schwarz");
    report(
        "criterion 10: Cauchy-Schwarz on 300 random vector pairs",
        &o,
        None,
    );
    assert!(o.passed(), "{:?}", o.failures);
}

#[test]
fn full_verification_under_budget() {
    let outcomes = run_all(SEED);
    let total: Duration = outcomes.iter().map(|o| o.wall).sum();
    println!(
        "{} — full verification: {} suites in {:.3}s (budget 60s)",
        if total <= Duration::from_secs(60) {
            "PASS"
        } else {
            "FAIL"
        },
        outcomes.len(),
        total.as_secs_f64()
    );
    for o in &outcomes {
        assert!(o.passed(), "suite {} failed: {:?}", o.name, o.failures);
    }
    assert!(total <= Duration::from_secs(60), "took {total:?}");
}
