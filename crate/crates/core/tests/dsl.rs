use std::io::Write;
use std::process::{Command, Output, Stdio};

use nagata_core::dsl::ast::{CheckKind, StatementKind};
use nagata_core::dsl::{parse, run, RunOptions, Verdict};

const GOLDEN: &str = include_str!("data/gl.ngt");

const HEADER: &str = "field F5
precision 24
series z = liouville(1)
ring A0 = poly(x, y)
ring A = localize(A0, at=(x, y))
ring S = adjoin(A, Z -> z)
derivation D on S over A : Z = 1
set C = powers(x)
";

fn nagata(script: &str, flags: &[&str]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_nagata"))
        .arg("-")
        .args(flags)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(script.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn golden_script_parses_to_five_checks() {
    let ast = parse(GOLDEN).unwrap();
    let kinds: Vec<CheckKind> = ast
        .checks()
        .map(|s| match &s.kind {
            StatementKind::Check { kind, .. } => *kind,
            _ => unreachable!(),
        })
        .collect();
    assert_eq!(
        kinds,
        [
            CheckKind::Membership,
            CheckKind::Closure,
            CheckKind::AlphaIso,
            CheckKind::AnalyticIso,
            CheckKind::OneCase
        ]
    );
    assert_eq!(ast.checks().next().unwrap().location.line, 12);
}

#[test]
fn golden_script_passes() {
    let out = nagata(GOLDEN, &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("no (val = -1)"));
    assert!(text.ends_with("5 pass, 0 fail, 0 indeterminate, 0 error\n"));
}

#[test]
fn json_report_has_the_documented_fields() {
    let out = nagata(GOLDEN, &["--json", "--no-timing", "--seed", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "nagata-report/1");
    assert_eq!(v["seed"], 3);
    assert_eq!(v["precision"], 24);
    let first = &v["commands"][0];
    assert_eq!(first["kind"], "membership");
    assert_eq!(first["verdict"], "pass");
    assert_eq!(first["evidence"]["answer"], "no");
    assert!(first.get("elapsed_ms").is_none());
    assert_eq!(v["totals"]["pass"], 5);
    let timed = nagata(GOLDEN, &["--json"]);
    let v: serde_json::Value = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(v["commands"][0]["elapsed_ms"].is_number());
}

#[test]
fn strict_mode_turns_indeterminate_into_exit_two() {
    let script = HEADER.to_string()
        + "module K = lattice(val >= 30)
scenario G = twist(S, D, K, C)
check membership G : 3*Z^2 - x*Z - y*Z - x^6*Z
";
    let lax = nagata(&script, &[]);
    assert_eq!(lax.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&lax.stderr).contains("warning"));
    assert_eq!(nagata(&script, &["--strict"]).status.code(), Some(2));
    // More precision settles it.
    assert_eq!(nagata(&script, &["--strict", "--precision", "40"]).status.code(), Some(0));
}

#[test]
fn failures_and_errors_exit_one() {
    let script = HEADER.to_string()
        + "module K = lattice(val >= 0)
scenario G = twist(S, D, K, C)
check membership G : 1/x
";
    let out = nagata(&script, &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("error"));
    let bad = nagata("precision 4\ncheck bogus G : x\n", &[]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("unknown check kind 'bogus' at line 2"));
}

#[test]
fn print_flag_emits_canonical_script() {
    let out = nagata(GOLDEN, &["--print"]);
    let printed = String::from_utf8(out.stdout).unwrap();
    assert!(!printed.contains('#'));
    assert_eq!(parse(&printed).unwrap(), parse(GOLDEN).unwrap());
}

#[test]
fn seeds_change_samples_but_not_verdicts() {
    let ast = parse(GOLDEN).unwrap();
    let at = |seed| {
        run(
            &ast,
            &RunOptions {
                seed,
                timing: false,
                ..RunOptions::default()
            },
        )
    };
    let (a, b) = (at(1), at(2));
    assert!(a.commands.iter().chain(&b.commands).all(|c| c.verdict == Verdict::Pass));
    assert_eq!(at(1).to_json(), a.to_json());
}

#[test]
fn every_check_kind_dispatches() {
    let script = HEADER.to_string()
        + "module K = lattice(val >= 0)
scenario G = twist(S, D, K, C)
spec E = extension(A, S, c=x)
ring T = poly(t)
ring L = local(T, order=4)
ring V = dvr(t)
module M = span(V, [t, 0], [0, t^2])
spec H = global_stable(t, primes=[t], ranks=[2])
check membership G : Z^2/x
check closure G : samples=20
check alpha-iso G : j=3, samples=5
check analytic-iso G : c=x
check one-case G : ideal=(x, Z), m=2
check correspondence G : threshold=-2
check c-analytic E : m=2
check quadratic E : pairs=[(Z, Z)]
check contract-extend E : side=small, ideal=(x)
check generator-bound E : ideal=(x)
check kq-generators G : x
check assoc-prime G
check tffr M : expected=2
check quotient-free M : m=3
check stable L : ideal=(t)
check emb-dim L : expected=1
check global-stable H
";
    let report = run(&parse(&script).unwrap(), &RunOptions::default());
    assert_eq!(report.commands.len(), 17);
    for c in &report.commands {
        assert_eq!(c.verdict, Verdict::Pass, "{}: {}", c.command, c.summary);
    }
}
