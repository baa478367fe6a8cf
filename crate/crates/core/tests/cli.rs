use std::process::{Command, Output};

fn opcong(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opcong"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn coefficients(o: &Output) -> Vec<String> {
    stdout(o)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split('\t').nth(1).unwrap().to_string())
        .collect()
}

#[test]
fn expand_examples() {
    let o = opcong(&["expand", "f2^1 * f1^-2", "--T", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(coefficients(&o), ["1", "2", "4", "8", "14", "24", "40", "64"]);
    let o = opcong(&["expand", "f1^1", "--T", "3"]);
    assert_eq!(coefficients(&o), ["1", "-1", "-1"]);
    let o = opcong(&["expand", "f2^5 * f1^-10", "--T", "4", "--ring", "mod2k:3"]);
    assert_eq!(coefficients(&o), ["1", "2", "4", "0"]);
}

#[test]
fn records_are_identical_across_runs_and_worker_counts() {
    let a = opcong(&["verify", "theorems", "--n-max", "300", "--format", "records", "--workers", "1"]);
    let b = opcong(&["verify", "theorems", "--n-max", "300", "--format", "records", "--workers", "6"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(first["kind"], "header");
    assert_eq!(first["defaults"]["T"], 500);
    assert_eq!(first["defaults"]["n_max"], 2000);
    assert_eq!(text.lines().filter(|l| l.contains("\"kind\":\"claim\"")).count(), 24);
}

#[test]
fn claim_record_field_order() {
    let o = opcong(&["verify", "theorems", "--n-max", "10", "--format", "records", "--timings"]);
    let line = stdout(&o).lines().nth(1).unwrap().to_string();
    let keys = [
        "\"kind\"", "\"source\"", "\"t\"", "\"m\"", "\"j\"", "\"k\"", "\"n_max\"", "\"verdict\"",
        "\"counterexample_n\"", "\"counterexample_value\"", "\"v2\"", "\"v2_exact\"", "\"ms\"",
    ];
    let positions: Vec<usize> = keys.iter().map(|k| line.find(k).unwrap_or_else(|| panic!("{k} in {line}"))).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{line}");
}

#[test]
fn bless_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = dir.path().join("dissections.txt");
    let fixture = fixture.to_str().unwrap();
    let o = opcong(&["verify", "dissections", "--T", "120", "--bless", fixture]);
    assert_eq!(o.status.code(), Some(0));
    let o = opcong(&["verify", "dissections", "--T", "120", "--check", fixture, "--timings"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = opcong(&["verify", "dissections", "--T", "121", "--check", fixture]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("differs"));
}

#[test]
fn exit_codes_under_fault_injection() {
    let dir = tempfile::tempdir().unwrap();

    let missing = dir.path().join("absent.cert");
    assert_eq!(opcong(&["verify", "witness", missing.to_str().unwrap()]).status.code(), Some(2));

    let garbled = dir.path().join("garbled.cert");
    std::fs::write(&garbled, opcong::witness::BUILTIN_FILE.replace("f8^-72", "f8^^-72")).unwrap();
    assert_eq!(opcong(&["verify", "witness", garbled.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(opcong(&["expand", "f1^2 * g3"]).status.code(), Some(2));
    assert_eq!(opcong(&["verify", "nothing"]).status.code(), Some(2));
    assert_eq!(opcong(&["verify", "theorems", "--workers", "0"]).status.code(), Some(2));
    assert_eq!(opcong(&["--check", missing.to_str().unwrap(), "verify", "eq1", "--T", "20"]).status.code(), Some(2));

    // a certificate whose identity fails but whose common factor still
    // divides: verification failure, not a data error
    let wrong = dir.path().join("wrong.cert");
    std::fs::write(&wrong, opcong::witness::BUILTIN_FILE.replace(", 37760\n", ", 37888\n")).unwrap();
    let o = opcong(&["verify", "witness", wrong.to_str().unwrap(), "--T", "40"]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("MISMATCH"));
}

#[test]
fn builtin_witness_and_families_report() {
    let o = opcong(&["verify", "witness", "builtin", "--T", "200"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("gcd=128 v2=7"));

    let o = opcong(&["verify", "families", "--n-max", "40", "--T", "100", "--format", "records"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let inf4 = text.lines().find(|l| l.contains("inf4(0,0,0)")).unwrap();
    assert!(inf4.contains("\"matched\":false") && inf4.contains("offset 42"));
}

#[test]
fn oracle_command() {
    let o = opcong(&["oracle", "--t", "1", "2", "--up-to", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("t=2 n=6  enumerated=") && stdout(&o).contains("14 passed"));
}
