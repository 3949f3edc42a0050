//! End-to-end tests of the `gcalc` binary: exit codes, determinism,
//! format round trips and the documented command examples.

use std::process::{Command, Output};

fn gcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcalc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn eval_example() {
    let out = gcalc(&["eval", "alpha(1)*(1+eps)"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "eps + eps^2");
}

#[test]
fn norm_example() {
    let out = gcalc(&["norm", "alpha(2)"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "e^-2 (valuation 2)");
}

#[test]
fn fmt_canonicalizes_and_round_trips() {
    let out = gcalc(&["fmt", "2*eps^1 + 1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1 + 2*eps");

    // fmt is idempotent on its own output.
    let twice = gcalc(&["fmt", stdout(&out).trim()]);
    assert_eq!(stdout(&twice).trim(), "1 + 2*eps");

    // JSON form round trip.
    let json = gcalc(&["fmt", "--out", "json", "1 + 2*eps"]);
    assert!(json.status.success());
    let back = gcalc(&["fmt", stdout(&json).trim()]);
    assert_eq!(stdout(&back).trim(), "1 + 2*eps");
}

#[test]
fn parse_errors_exit_with_two_and_offsets() {
    let out = gcalc(&["fmt", "eps^1/0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("offset 6"), "stderr: {err}");

    let out = gcalc(&["eval", "1 +"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn contract_failures_exit_with_one() {
    // Inversion of a truncation-only zero.
    let out = gcalc(&["eval", "1/(0 + O(eps^5))"]);
    assert_eq!(out.status.code(), Some(2)); // O-literal is not an expression
    let out = gcalc(&["derive", "betanormsq(x1)", "--at", "0 + O(eps^4)"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_suite_exit_codes() {
    let out = gcalc(&["verify", "--suite", "ultrametric"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("PASS ultrametric"));

    let out = gcalc(&["verify", "--suite", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn deterministic_output_for_fixed_seed() {
    let args = [
        "probe",
        "alpha(5)*x1",
        "--domain",
        "interval(-1,1)",
        "--trials",
        "50",
        "--seed",
        "0xABCD",
    ];
    let a = gcalc(&args);
    let b = gcalc(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("witness-found"));
}

#[test]
fn derive_and_integrate_examples() {
    let out = gcalc(&["derive", "x1^2", "--at", "1+eps"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("2 + 2*eps"));

    let out = gcalc(&["integrate", "2*t", "--from", "0", "--to", "1+eps"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1 + 2*eps + eps^2");
}

#[test]
fn net_pipeline() {
    let out = gcalc(&["net", "from-gennum", "3*eps^1/2 + eps"]);
    assert!(out.status.success());
    let csv = stdout(&out);
    assert!(csv.starts_with("eps,re,im\n"));

    let dir = std::env::temp_dir().join("gcalc-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("net.csv");
    std::fs::write(&path, &csv).unwrap();
    let est = gcalc(&["net", "estimate", path.to_str().unwrap()]);
    assert!(est.status.success());
    let text = stdout(&est);
    let v: f64 = text
        .trim()
        .rsplit(' ')
        .next()
        .unwrap()
        .parse()
        .expect("numeric estimate");
    assert!((v - 0.5).abs() <= 0.05, "estimate {v}");
}

#[test]
fn series_commands() {
    let out = gcalc(&["series", "geometric", "--converges-at", "eps"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("converges"));

    let out = gcalc(&[
        "series",
        "series(center=0; a0=1, a1=1)",
        "--eval-at",
        "eps",
        "--order",
        "3",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("1 + eps"));
}

#[test]
fn complex_coefficients_require_complex_mode() {
    let out = gcalc(&["eval", "(1+2i)*eps"]);
    assert_eq!(out.status.code(), Some(1));
    let out = gcalc(&["--mode", "complex", "eval", "(0+1i)*eps"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "(0+1i)*eps");
}
