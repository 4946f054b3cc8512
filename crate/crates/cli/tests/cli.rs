use std::fs;
use std::process::{Command, Output};

use expdist::bound_engine::BoundCertificate;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expdist"))
        .args(args)
        .env_remove("EXPDIST_PRECISION")
        .output()
        .expect("binary runs")
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expdist"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("no signal")
}

#[test]
fn bound_verify_round_trip_and_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let cert_path = dir.path().join("cert.json");
    let cert_str = cert_path.to_str().unwrap();

    let out = run(&[
        "bound",
        "--alpha",
        "3",
        "--beta",
        "1/1000",
        "--max-K",
        "4",
        "--max-L",
        "3",
        "--out",
        cert_str,
    ]);
    assert_eq!(code(&out), 0, "bound failed: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("rounded down"), "summary lacks direction: {text}");
    assert!(text.contains("certificate written"), "no write notice: {text}");

    let ver = run(&["verify", "--cert", cert_str]);
    assert_eq!(code(&ver), 0, "verify failed: {}", stderr(&ver));
    assert!(stdout(&ver).contains("certificate verified"));

    // Any bit of the stored inequality data must be load-bearing.
    let original = fs::read_to_string(cert_str).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&original).unwrap();
    doc["K"] = serde_json::json!(doc["K"].as_u64().unwrap() + 1);
    let tampered = dir.path().join("tampered.json");
    fs::write(&tampered, serde_json::to_string(&doc).unwrap()).unwrap();
    let bad = run(&["verify", "--cert", tampered.to_str().unwrap()]);
    assert_eq!(code(&bad), 1);
    assert!(stderr(&bad).contains("verification failed"));

    let mut doc2: serde_json::Value = serde_json::from_str(&original).unwrap();
    let lhs = doc2["lhs"]["value"].as_str().unwrap().to_string();
    doc2["lhs"]["value"] = serde_json::json!(format!("{lhs}1"));
    fs::write(&tampered, serde_json::to_string(&doc2).unwrap()).unwrap();
    let bad2 = run(&["verify", "--cert", tampered.to_str().unwrap()]);
    assert_eq!(code(&bad2), 1);

    let garbled = dir.path().join("garbled.json");
    fs::write(&garbled, "{not json").unwrap();
    let bad3 = run(&["verify", "--cert", garbled.to_str().unwrap()]);
    assert_eq!(code(&bad3), 1);
    assert!(stderr(&bad3).contains("malformed certificate"));

    let missing = run(&["verify", "--cert", "/nonexistent/cert.json"]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn emitted_json_is_stable_under_reserialization() {
    let out = run(&[
        "bound", "--alpha", "3", "--beta", "1/1000", "--max-K", "4", "--max-L", "3",
    ]);
    assert_eq!(code(&out), 0, "bound failed: {}", stderr(&out));
    let text = stdout(&out);
    let cert = BoundCertificate::from_json(&text).unwrap();
    assert_eq!(cert.to_json().unwrap(), text.trim_end());

    // Key order is fixed by declaration, not alphabetized.
    let k_pos = text.find("\"K\"").unwrap();
    let l_pos = text.find("\"L\"").unwrap();
    let alpha_pos = text.find("\"alpha\"").unwrap();
    assert!(alpha_pos < k_pos && k_pos < l_pos);
}

#[test]
fn infeasible_caps_exit_1_with_a_reason() {
    let out = run(&[
        "bound", "--alpha", "3", "--beta", "1", "--max-K", "4", "--max-L", "3",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("no (K, L, E)"), "got: {}", stderr(&out));
}

#[test]
fn corollary4_prints_the_frozen_constants() {
    let out = run(&["corollary4"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("25.0059"), "missing radius: {text}");
    assert!(text.contains("276.55"), "missing exponent: {text}");
    assert!(text.contains("rounded nearest"), "missing direction: {text}");

    let numeric = run(&["corollary4", "--numeric"]);
    assert_eq!(code(&numeric), 0);
    assert!(stdout(&numeric).contains("bisection agrees"));
}

#[test]
fn corollary4_json_has_directed_values() {
    let out = run(&["--json", "corollary4"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let e = &doc["closed_form"]["E"];
    assert_eq!(e["rounding"], "nearest");
    assert!(e["value"].as_str().unwrap().starts_with("25.00595527817254235120674"));
}

#[test]
fn malformed_expressions_exit_2() {
    let out = run(&["bound", "--alpha", "3+/", "--beta", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("cannot parse --alpha"));

    let out = run(&["diagnose", "--alpha", "3", "--beta", "1", "--k", "2", "--l", "3", "--e", "abc"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("cannot parse --e"));

    let out = run(&["--precision", "16", "corollary4"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("64-bit minimum"));
}

#[test]
fn precision_env_override_is_honored() {
    let ok = run_env(&["corollary4"], "EXPDIST_PRECISION", "128");
    assert_eq!(code(&ok), 0);
    let bad = run_env(&["corollary4"], "EXPDIST_PRECISION", "32");
    assert_eq!(code(&bad), 2);
}

#[test]
fn lemma_suites_report_counts_and_exit_codes() {
    let out = run(&["lemmas", "--suite", "feldman"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("16500/16500"), "missing counts: {text}");
    assert!(text.contains("result: PASS"));

    let heights = run(&["lemmas", "--suite", "heights"]);
    assert_eq!(code(&heights), 1);
    let text = stdout(&heights);
    assert!(text.contains("height_bound_grid: 19/20"), "got: {text}");
    assert!(text.contains("(K,L) = (1,2)"), "missing the known cell: {text}");

    let unknown = run(&["lemmas", "--suite", "nonesuch"]);
    assert_eq!(code(&unknown), 2);
}

#[test]
fn diagnose_reports_both_regimes() {
    let out = run(&["diagnose", "--alpha", "3", "--beta", "1", "--k", "2", "--l", "3", "--e", "6/5"]);
    assert_eq!(code(&out), 0, "diagnose failed: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("mu = 0"));
    assert!(text.contains("15625/46656"));
    assert!(text.contains("bounds are consistent"));

    let contra = run(&[
        "diagnose", "--alpha", "3", "--beta", "1/1000", "--k", "2", "--l", "3", "--e", "1667",
    ]);
    assert_eq!(code(&contra), 0, "diagnose failed: {}", stderr(&contra));
    assert!(stdout(&contra).contains("untenable"));

    let json = run(&[
        "--json", "diagnose", "--alpha", "3", "--beta", "1", "--k", "2", "--l", "3", "--e", "6/5",
    ]);
    assert_eq!(code(&json), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(doc["mu"], 0);
    assert_eq!(doc["eps_hypothesis"], "15625/46656");
    assert_eq!(doc["contradiction"], false);
}

#[test]
fn hp_table_dumps_exact_coefficients() {
    let out = run(&["hp-table", "--nodes", "0,1", "--params", "2,2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("sigma = 4"));
    assert!(text.contains("z^3"));
    assert!(text.contains("p_{0,0}"));

    let bad = run(&["hp-table", "--nodes", "0,0", "--params", "1,1"]);
    assert_eq!(code(&bad), 2, "coincident nodes must be a usage error");
}
