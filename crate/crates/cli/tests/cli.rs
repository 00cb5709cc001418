use std::path::PathBuf;
use std::process::Command;

use serde::de::DeserializeOwned;
use serde::Serialize;
use veronese_cli::output::{
    MapOutput, MatrixOutput, MemberOutput, MinorsOutput, OracleOutput, VerifyOutput,
};
use veronese_cli::{exit, run, Outcome};
use veronese_core::Step1Certificate;

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("veronese").chain(args.iter().copied()))
}

fn roundtrips<T: Serialize + DeserializeOwned>(text: &str) -> T {
    let doc: T = serde_json::from_str(text).unwrap();
    let mut again = serde_json::to_string_pretty(&doc).unwrap();
    again.push('\n');
    assert_eq!(again, text);
    let raw: serde_json::Value = serde_json::from_str(text).unwrap();
    assert_eq!(raw["schema_version"], 1);
    doc
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("veronese-cli-{}-{name}", std::process::id()))
}

#[test]
fn matrix_text_matches_grid() {
    let out = cli(&["--n", "2", "--d", "3", "matrix"]);
    assert_eq!(out.code, exit::SUCCESS);
    assert!(out
        .stdout
        .contains("  x0^3     x0^2*x1   x0^2*x2   x0*x1^2  x0*x1*x2  x0*x2^2\n"));
    assert!(out
        .stdout
        .contains("  z_{2,0,1}  z_{1,1,1}  z_{1,0,2}  z_{0,2,1}  z_{0,1,2}  z_{0,0,3}\n"));
}

#[test]
fn matrix_degree_one_has_no_minors() {
    let out = cli(&["--n", "1", "--d", "1", "matrix"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("no 2-minors"));
    assert!(out.stdout.contains("M:\n  z_{1,0}\n  z_{0,1}\n"));
}

#[test]
fn matrix_json() {
    let out = cli(&["--n", "3", "--d", "2", "--format", "json", "matrix"]);
    let doc: MatrixOutput = roundtrips(&out.stdout);
    assert_eq!(doc.matrix.rows.len(), 4);
    assert!(doc.matrix.rows.iter().all(|r| r.len() == 4));
    assert_eq!(doc.monomials[0][0], "x0^2");
}

#[test]
fn minors_counts() {
    for (n, d, count) in [("1", "2", 1), ("1", "3", 3), ("2", "2", 6)] {
        let out = cli(&["--n", n, "--d", d, "--format", "json", "minors"]);
        let doc: MinorsOutput = roundtrips(&out.stdout);
        assert_eq!(doc.count, count);
        assert_eq!(doc.minors.len(), count);
    }
    let out = cli(&["--n", "1", "--d", "2", "minors"]);
    assert_eq!(
        out.stdout,
        "z_{2,0} z_{0,2} - z_{1,1}^2\n1 distinct 2-minor\n"
    );
}

#[test]
fn eval_invert_member() {
    assert_eq!(
        cli(&["--n", "1", "--d", "3", "eval", "[1 : 2]"]).stdout,
        "[1 : 2 : 4 : 8]\n"
    );
    assert_eq!(
        cli(&["--n", "1", "--d", "3", "invert", "[1 : 2 : 4 : 8]"]).stdout,
        "[1 : 2]\n"
    );
    assert_eq!(
        cli(&["--n", "1", "--d", "2", "member", "[0 : 1 : 0]"]).stdout,
        "false (minor z_{2,0} z_{0,2} - z_{1,1}^2 evaluates to -1)\n"
    );
    assert_eq!(
        cli(&["--n", "1", "--d", "2", "member", "[1 : 3 : 9]"]).stdout,
        "true\n"
    );
    assert_eq!(
        cli(&["--n", "1", "--d", "2", "eval", "[1/2 : 3]"]).stdout,
        "[1 : 6 : 36]\n"
    );
    assert_eq!(
        cli(&["--n", "1", "--d", "2", "--field", "fp:5", "eval", "[1 : 3]"]).stdout,
        "[1 : 3 : 4]\n"
    );
}

#[test]
fn invert_reports_non_members() {
    let out = cli(&["--n", "1", "--d", "2", "invert", "[0 : 1 : 0]"]);
    assert_eq!(out.code, exit::CHECK_FAILURE);
    assert!(out.stdout.contains("evaluates to -1"));
    let out = cli(&[
        "--n",
        "1",
        "--d",
        "2",
        "--format",
        "json",
        "invert",
        "[0 : 1 : 0]",
    ]);
    let doc: MapOutput = roundtrips(&out.stdout);
    assert!(doc.output.is_none() && doc.error.is_some());
}

#[test]
fn map_json() {
    let out = cli(&[
        "--n",
        "1",
        "--d",
        "3",
        "--format",
        "json",
        "invert",
        "[0 : 0 : 0 : 1]",
    ]);
    let doc: MapOutput = roundtrips(&out.stdout);
    assert_eq!(
        (doc.output.as_deref(), doc.chart),
        (Some("[0 : 1]"), Some(1))
    );
    let out = cli(&[
        "--n",
        "1",
        "--d",
        "2",
        "--format",
        "json",
        "member",
        "[0 : 1 : 0]",
    ]);
    let doc: MemberOutput = roundtrips(&out.stdout);
    assert!(!doc.member);
    assert_eq!(doc.value.as_deref(), Some("-1"));
}

#[test]
fn usage_errors() {
    for args in [
        &["--n", "1", "--d", "3", "eval", "[1 : 2 : 3]"][..],
        &["--n", "1", "--d", "3", "eval", "[1 : x]"],
        &["--n", "1", "--d", "3", "eval", "[0 : 0]"],
        &["--n", "1", "--d", "0", "matrix"],
        &["--d", "2", "matrix"],
        &["--n", "1", "--d", "2", "--field", "fp:6", "matrix"],
        &["--n", "1", "--d", "2", "oracle"],
        &["--n", "1", "--d", "2", "frobnicate"],
    ] {
        assert_eq!(cli(args).code, exit::USAGE, "{args:?}");
    }
}

#[test]
fn verify_passes() {
    let out = cli(&["--n", "2", "--d", "3", "verify"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.ends_with("all checks passed\n"));
    let out = cli(&[
        "--n", "1", "--d", "4", "--field", "fp:7", "--format", "json", "verify",
    ]);
    assert_eq!(out.code, 0);
    let doc: VerifyOutput = roundtrips(&out.stdout);
    assert!(doc.passed);
    assert_eq!(doc.checks.len(), 4);
}

#[test]
fn verify_rejects_corrupted_certificate() {
    let path = scratch("cert.json");
    let p = path.to_str().unwrap();
    let out = cli(&["--n", "2", "--d", "3", "verify", "--write-certificate", p]);
    assert_eq!(out.code, 0);
    let mut cert: Step1Certificate =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(
        cli(&["--n", "2", "--d", "3", "verify", "--certificate", p]).code,
        0
    );

    cert.steps.remove(0);
    std::fs::write(&path, serde_json::to_string(&cert).unwrap()).unwrap();
    let out = cli(&["--n", "2", "--d", "3", "verify", "--certificate", p]);
    assert_eq!(out.code, exit::CHECK_FAILURE);
    assert!(out.stdout.contains("FAIL step1_certificate"));

    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(
        cli(&["--n", "2", "--d", "3", "verify", "--certificate", p]).code,
        exit::USAGE
    );
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn oracle_examples() {
    for (n, q, count) in [("1", "fp:3", 4), ("2", "fp:3", 13)] {
        let out = cli(&[
            "--n", n, "--d", "2", "--field", q, "--format", "json", "oracle",
        ]);
        assert_eq!(out.code, 0);
        let doc: OracleOutput = roundtrips(&out.stdout);
        assert!(doc.equal);
        assert_eq!(doc.reports.len(), 2);
        for r in &doc.reports {
            assert_eq!((r.variety_count, r.reference_count), (count, count));
        }
    }
}

#[test]
fn oracle_budget_refusal() {
    let out = cli(&["--n", "2", "--d", "3", "--field", "fp:5", "oracle"]);
    assert_eq!(out.code, exit::BUDGET);
    assert!(out.stderr.contains("budget"));
    let out = cli(&[
        "--n", "1", "--d", "2", "--field", "fp:3", "--budget", "10", "oracle",
    ]);
    assert_eq!(out.code, exit::BUDGET);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_veronese");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["--n", "1", "--d", "3", "eval", "[1 : 2]"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8(ok.stdout).unwrap(), "[1 : 2 : 4 : 8]\n");
    assert_eq!(
        status(&["--n", "1", "--d", "2", "invert", "[0 : 1 : 0]"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        status(&["--n", "1", "--d", "0", "matrix"]).status.code(),
        Some(2)
    );
    assert_eq!(
        status(&["--n", "2", "--d", "3", "--field", "fp:5", "oracle"])
            .status
            .code(),
        Some(3)
    );
}
