use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gammacalc"));
    c.env_remove("GAMMACALC_TRIALS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn isometry_relation_is_equal() {
    assert_eq!(run(&["equal", "U[s1]'*U[s1]", "1"]).status.code(), Some(0));
    assert_eq!(run(&["equal", "U[s1]*U[s1]'", "1"]).status.code(), Some(1));
}

#[test]
fn harmonic_sequence_outside_l1() {
    assert_eq!(
        run(&["member", "--ideal", "lp:1", "diag(pow(1;1))"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["member", "--ideal", "lp+:1", "diag(pow(1;1))"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        run(&["member", "--ideal", "c0", "pow(1;1/2)"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        run(&["member", "--ideal", "cf", "U[s1]"]).status.code(),
        Some(1)
    );
}

#[test]
fn type_error_reports_position() {
    let o = run(&["eval", "U[s1] + chi[even]"]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("type error at line 1, column 9"), "{e}");
    assert!(e.contains("expected Op, found Seq"), "{e}");
}

#[test]
fn syntax_error_reports_position() {
    let o = run(&["eval", "U[s1] *\n (diag(e(1)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("syntax error at line 2"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn doubled_matrix_unit() {
    let o = run(&["eval", "diag(e(1)) + diag(e(1))"]);
    assert_eq!(o.status.code(), Some(0));
    let printed = stdout(&o);
    assert_eq!(
        run(&["equal", printed.trim(), "2*diag(e(1))"])
            .status
            .code(),
        Some(0)
    );
    let w = run(&["window", "--n", "3", "diag(e(1)) + diag(e(1))"]);
    assert_eq!(
        stdout(&w).trim(),
        r#"{"n":3,"ring":"Q","entries":[[1,1,"2"]]}"#
    );
}

#[test]
fn window_of_infinite_sum() {
    let o = run(&["window", "--n", "8", "oplus(U[s1], Phi(U[s1]))"]);
    assert_eq!(o.status.code(), Some(0));
    let p = run(&["window", "--n", "8", "Phi(U[s1])"]);
    assert_eq!(stdout(&o), stdout(&p));
    assert_eq!(
        run(&["equal", "oplus(2, Phi(2))", "Phi(2)"]).status.code(),
        Some(0)
    );
    let e = run(&["eval", "Phi(U[s1])"]);
    assert_eq!(e.status.code(), Some(2));
}

#[test]
fn rings_are_respected() {
    assert_eq!(
        run(&["--ring", "Z/5", "equal", "m5:3 + m5:4", "m5:2"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        run(&["--ring", "Q(i)", "equal", "i*i", "-1"]).status.code(),
        Some(0)
    );
    assert_eq!(run(&["--ring", "Z", "eval", "1/2"]).status.code(), Some(2));
    assert_eq!(run(&["--ring", "R", "eval", "1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "-3/6"]).status.code(), Some(0));
    assert_eq!(stdout(&run(&["eval", "-3/6"])).trim(), "-1/2");
}

#[test]
fn decompose_from_json_and_csv() {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let json = dir.join("cli_decompose.json");
    std::fs::write(
        &json,
        r#"{"rows":3,"cols":3,"ring":"Z/7","entries":[[1,1,"1"],[1,2,"2"],[2,1,"3"],[3,3,"6"]]}"#,
    )
    .unwrap();
    let o = run(&["decompose", "--file", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["ring"], "m7");
    let comps = doc["components"].as_array().unwrap();
    assert!(comps.len() >= 2);
    assert!(comps
        .iter()
        .all(|c| !c["witness"].as_array().unwrap().is_empty()));

    let csv = dir.join("cli_decompose.csv");
    std::fs::write(&csv, "1,2\n3,0\n").unwrap();
    let o = run(&["decompose", "--file", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let o = run(&[
        "decompose",
        "--file",
        dir.join("missing.json").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn polar_and_unit_witness() {
    let o = run(&["polar", "diag(-2*chi[even])*U[s1]"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("|T| = "));
    let o = run(&["unit-witness", "diag(3*chi[odd])*U[f1]"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("U[h]*D*x*U[g] = 1"));
    assert_eq!(run(&["unit-witness", "diag(e(2))"]).status.code(), Some(2));
}

#[test]
fn cohn_normal_form() {
    let o = run(&["cohn-normalize", "S1'*S1 + E(1,2)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(
        out.starts_with("1 + S'[1] - S[1]S'[11] - S[2]S'[12]"),
        "{out}"
    );
    assert!(out.contains("level "));
    assert_eq!(run(&["cohn-normalize", "U[s1]"]).status.code(), Some(2));
}

#[test]
fn verify_single_suite() {
    let o = run(&["verify-paper", "--suite", "sumring", "--trials", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("sumring"));
    assert!(stdout(&o).contains("pass"));
    assert_eq!(
        run(&["verify-paper", "--suite", "nope"]).status.code(),
        Some(2)
    );
}

#[test]
fn trial_count_from_environment() {
    let o = bin()
        .args(["verify-paper", "--suite", "dagproj"])
        .env("GAMMACALC_TRIALS", "7")
        .output()
        .unwrap();
    let line = stdout(&o).lines().nth(1).unwrap().to_string();
    assert_eq!(
        line.split_whitespace().collect::<Vec<_>>(),
        ["dagproj", "7", "7", "pass"]
    );
}

#[test]
fn verify_paper_matches_golden_output() {
    let args = ["verify-paper", "--seed", "3", "--trials", "12"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let golden = include_str!("golden/verify_paper_seed3.txt");
    assert_eq!(stdout(&first), golden);
}
