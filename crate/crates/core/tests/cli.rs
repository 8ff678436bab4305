use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn agmc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_agmc"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn agmc")
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = agmc(dir, args);
    assert!(
        out.status.success(),
        "agmc {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const KEYGEN: [&str; 9] = [
    "keygen",
    "--curve",
    "hermitian",
    "--r",
    "3",
    "--m",
    "13",
    "--seed",
    "7",
];

#[test]
fn attack_recovers_message() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &KEYGEN);
    ok(d, &["encrypt", "--seed", "3", "--msg-out", "sent.json"]);
    ok(
        d,
        &["attack", "--ct", "ct.json", "--msg-out", "attacked.json"],
    );
    ok(d, &["decrypt", "--out", "decrypted.json"]);
    let sent = json(&d.join("sent.json"));
    assert_eq!(json(&d.join("attacked.json")), sent);
    assert_eq!(json(&d.join("decrypted.json")), sent);

    // The transcript alone is enough for later ciphertexts.
    ok(
        d,
        &[
            "encrypt",
            "--seed",
            "4",
            "--msg-out",
            "sent2.json",
            "--out",
            "ct2.json",
        ],
    );
    ok(
        d,
        &[
            "attack",
            "--ct",
            "ct2.json",
            "--transcript-in",
            "transcript.json",
            "--transcript",
            "t2.json",
            "--msg-out",
            "attacked2.json",
        ],
    );
    assert_eq!(json(&d.join("attacked2.json")), json(&d.join("sent2.json")));
}

#[test]
fn outputs_are_reproducible() {
    let runs: Vec<Vec<Vec<u8>>> = (0..2)
        .map(|_| {
            let dir = TempDir::new().unwrap();
            let d = dir.path();
            ok(d, &KEYGEN);
            ok(d, &["encrypt", "--seed", "11"]);
            ok(d, &["attack", "--algorithm", "1"]);
            ["pub.json", "sec.json", "ct.json", "transcript.json"]
                .iter()
                .map(|f| fs::read(d.join(f)).unwrap())
                .collect()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn malformed_ciphertext_is_rejected() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &KEYGEN);
    ok(d, &["encrypt"]);
    let mut ct = json(&d.join("ct.json"));
    ct["y"].as_array_mut().unwrap().pop();
    ct["n"] = Value::from(26);
    fs::write(d.join("short.json"), ct.to_string()).unwrap();
    assert_eq!(
        agmc(d, &["decrypt", "--ct", "short.json"]).status.code(),
        Some(3)
    );
    fs::write(d.join("junk.json"), "{").unwrap();
    assert_eq!(
        agmc(d, &["decrypt", "--ct", "junk.json"]).status.code(),
        Some(3)
    );
    assert_eq!(
        agmc(d, &["decrypt", "--ct", "missing.json"]).status.code(),
        Some(3)
    );
}

#[test]
fn attack_does_not_take_secret_key() {
    let dir = TempDir::new().unwrap();
    let out = agmc(dir.path(), &["attack", "--sec", "sec.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        agmc(dir.path(), &["keygen", "--curve", "hermitian", "--m", "13"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(agmc(dir.path(), &["frobnicate"]).status.code(), Some(2));
}

#[test]
fn params_table() {
    let dir = TempDir::new().unwrap();
    let out = ok(
        dir.path(),
        &["params", "--curve", "suzuki", "--q0", "4", "--m", "500"],
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let field = |name: &str| {
        text.lines()
            .find(|l| l.split("  ").next() == Some(name))
            .map(|l| l[name.len()..].trim().to_string())
            .unwrap_or_else(|| panic!("no {name} row in\n{text}"))
    };
    assert_eq!(field("k"), "647");
    assert_eq!(field("t"), "64");
    assert!(field("key size").contains("(414 KB)"));

    let out = ok(
        dir.path(),
        &[
            "params",
            "--curve",
            "hermitian",
            "--r",
            "3",
            "--m",
            "13",
            "--json",
        ],
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["n"], 27);
    assert_eq!(v["g"], 3);
    assert_eq!(v["k_pub"], 16);
    assert_eq!(v["t"], 2);
}

#[test]
fn guard_violations_exit_4() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    // t = 0.
    let out = agmc(
        d,
        &["keygen", "--curve", "hermitian", "--r", "2", "--m", "3"],
    );
    assert_eq!(out.status.code(), Some(4));
    let out = agmc(
        d,
        &["params", "--curve", "hermitian", "--r", "3", "--m", "27"],
    );
    assert_eq!(out.status.code(), Some(4));
    // Algorithm 1 runs out of room below the top of the chain; Algorithm 2 does not.
    ok(
        d,
        &["keygen", "--curve", "hermitian", "--r", "3", "--m", "10"],
    );
    let out = agmc(d, &["attack", "--algorithm", "1", "--route", "direct"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Algorithm 1 refused"));
    ok(d, &["attack", "--algorithm", "2"]);
}

#[test]
fn bench_writes_csv() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "bench",
            "--curve",
            "hermitian",
            "--r",
            "3",
            "--m",
            "13",
            "--trials",
            "2",
            "--ciphertexts",
            "2",
            "--out",
            "b.csv",
        ],
    );
    let csv = fs::read_to_string(d.join("b.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("trial,seed,q,n,m,g,t,algorithm,lambda,decoded,ciphertexts,stage,seconds")
    );
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.split(',').count() == 13));
}
