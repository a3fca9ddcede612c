use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rankmetric"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const SMALL: [&str; 10] = ["--m", "28", "--n", "24", "--k", "12", "--lambda", "6", "--s", "1"];

#[test]
fn encrypt_then_decrypt() {
    let dir = tempfile::tempdir().unwrap();
    let (sk, pk) = (dir.path().join("key.json"), dir.path().join("key.pub.json"));
    let (ct, msg, dec) = (dir.path().join("ct.json"), dir.path().join("m.json"), dir.path().join("dec.json"));
    let mut args = vec!["keygen", "--seed", "3", "--out", p(&sk)];
    args.extend(SMALL);
    ok(&args);
    assert!(pk.exists());

    let sampled = ok(&["encrypt", "--seed", "4", "--key", p(&pk), "--out", p(&ct)]);
    fs::write(&msg, &sampled.stdout).unwrap();
    ok(&["decrypt", "--key", p(&sk), "--in", p(&ct), "--out", p(&dec)]);
    assert_eq!(json(&dec), json(&msg));

    // encrypting a given message file
    let ct2 = dir.path().join("ct2.json");
    ok(&["encrypt", "--seed", "5", "--key", p(&pk), "--in", p(&msg), "--out", p(&ct2)]);
    ok(&["decrypt", "--key", p(&sk), "--in", p(&ct2), "--out", p(&dec)]);
    assert_eq!(json(&dec), json(&msg));
}

#[test]
fn attack_uses_the_public_key_only() {
    let root = tempfile::tempdir().unwrap();
    let secret_dir = root.path().join("secret");
    let public_dir = root.path().join("public");
    fs::create_dir_all(&secret_dir).unwrap();
    fs::create_dir_all(&public_dir).unwrap();
    let sk = secret_dir.join("key.json");
    let pk = public_dir.join("key.pub.json");
    let ct = public_dir.join("ct.json");
    let report = public_dir.join("report.json");

    ok(&["keygen", "--twisted", "--seed", "11", "--out", p(&sk), "--pub", p(&pk)]);
    let msg: Value = serde_json::from_slice(
        &ok(&["encrypt", "--seed", "12", "--key", p(&pk), "--out", p(&ct)]).stdout,
    )
    .unwrap();
    assert!(!fs::read_to_string(&pk).unwrap().contains("\"secret\""));

    // a secret key file is refused outright
    let refused = run(&["attack", "--key", p(&sk), "--in", p(&ct), "--report", p(&report)]);
    assert_eq!(refused.status.code(), Some(2));
    assert!(!report.exists());

    // with the secret directory gone, the attack still succeeds
    fs::remove_dir_all(&secret_dir).unwrap();
    ok(&["attack", "--mode", "extension", "--key", p(&pk), "--in", p(&ct), "--report", p(&report)]);
    let rep = json(&report);
    assert_eq!(rep["success"], Value::Bool(true));
    assert_eq!(rep["recovered"], msg["m"]);
    assert_eq!(rep["i_used"], Value::from(1));
    assert!(rep["timings_ms"]["total"].is_number());
}

#[test]
fn failed_attack_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let (sk, pk, ct) = (
        dir.path().join("k.json"),
        dir.path().join("k.pub.json"),
        dir.path().join("ct.json"),
    );
    let mut args = vec!["keygen", "--seed", "1", "--out", p(&sk)];
    args.extend(SMALL);
    ok(&args);
    ok(&["encrypt", "--seed", "2", "--key", p(&pk), "--out", p(&ct)]);
    let out = run(&["attack", "--mode", "overbeck", "--i-max", "1", "--key", p(&pk), "--in", p(&ct)]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "method_failure");
    let rep: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["success"], Value::Bool(false));
    assert!(rep["failure"].as_str().unwrap().contains("dual"));
}

#[test]
fn usage_and_io_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    let out = run(&["decrypt", "--key", p(&missing), "--in", p(&missing)]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "io");

    assert_eq!(run(&["keygen"]).status.code(), Some(2));
    assert_eq!(run(&["params", "--q", "4"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));

    let garbage = dir.path().join("g.json");
    fs::write(&garbage, "{").unwrap();
    let out = run(&["encrypt", "--key", p(&garbage), "--out", p(&missing)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let gen = |name: &str, seed: &str| {
        let sk = dir.path().join(format!("{name}.json"));
        ok(&["keygen", "--twisted", "--seed", seed, "--out", p(&sk)]);
        let ct = dir.path().join(format!("{name}.ct.json"));
        let pk = dir.path().join(format!("{name}.pub.json"));
        ok(&["encrypt", "--seed", seed, "--key", p(&pk), "--out", p(&ct)]);
        (
            fs::read(&sk).unwrap(),
            fs::read(&pk).unwrap(),
            fs::read(&ct).unwrap(),
        )
    };
    let a = gen("a", "7");
    let b = gen("b", "7");
    let c = gen("c", "8");
    assert_eq!(a, b);
    assert_ne!(a.0, c.0);

    let pa = ok(&["params", "--twisted"]).stdout;
    let pb = ok(&["params", "--twisted"]).stdout;
    assert_eq!(pa, pb);
    let params: Value = serde_json::from_slice(&pa).unwrap();
    assert_eq!(params["instantiation"], "twisted");
    assert_eq!(params["field"]["m"], 104);
}

#[test]
fn distinguisher_profile() {
    let dir = tempfile::tempdir().unwrap();
    let sk = dir.path().join("gab.json");
    ok(&["keygen", "--seed", "5", "--out", p(&sk)]);
    let secret = String::from_utf8(ok(&["distinguish", "--target", "secret", "--key", p(&sk), "--i-max", "3"]).stdout).unwrap();
    assert_eq!(secret, "i,dim\n0,18\n1,19\n2,20\n3,21\n");

    let csv = dir.path().join("pub.csv");
    let pk = dir.path().join("gab.pub.json");
    ok(&["distinguish", "--key", p(&pk), "--i-max", "1", "--out", p(&csv)]);
    let public = fs::read_to_string(&csv).unwrap();
    // one more dimension from Λ_1 of the rank-1 distortion
    assert_eq!(public, "i,dim\n0,18\n1,21\n");
}
