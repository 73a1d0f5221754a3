use std::fs;
use std::path::Path;

use prwlab::cli::main_with_args;

fn run(dir: &Path, args: &[&str]) -> i32 {
    let out = dir.to_str().unwrap();
    let mut argv = vec!["prwlab", "--out", out];
    argv.extend_from_slice(args);
    main_with_args(argv)
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn classify_writes_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["classify", "--law", "two-point", "--a", "0.1,0.3", "--x", "1"]), 0);
    let v = read_json(&dir.path().join("classify.json"));
    assert_eq!(v["experiment"], "classify");
    assert!(dir.path().join("classify.csv").exists());
}

#[test]
fn verify_small_budget_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let code = run(
        dir.path(),
        &["--paths", "20000", "--horizon", "256", "verify", "--law", "two-point", "--theorem", "exponential_tau", "--a", "0.1", "--x", "1", "--format", "json"],
    );
    assert_eq!(code, 0);
    let v = read_json(&dir.path().join("verify.json"));
    let rows = v["result"][0]["rows"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["agree"] == "yes"), "{v}");
    assert!(!dir.path().join("verify.csv").exists());
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(
        &cfg,
        r#"{"experiment": "renewal", "law": {"family": "independent",
            "xi": {"family": "exponential", "params": {"rate": 1}},
            "eta": {"family": "exponential", "params": {"rate": 1}}},
            "params": {"y": [1, 2]}, "budget": {"paths": 2000, "n_max": 32}, "seed": 5}"#,
    )
    .unwrap();
    assert_eq!(run(dir.path(), &["--config", cfg.to_str().unwrap(), "--seed", "9", "renewal"]), 0);
    let v = read_json(&dir.path().join("renewal.json"));
    assert_eq!(v["seed"], 9);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["verify", "--law", "two-point", "--theorem", "no_such_theorem"]), 2);
    assert_eq!(run(dir.path(), &["classify", "--law", "no-such-preset"]), 2);
    assert_eq!(run(dir.path(), &["--config", "/nonexistent/config.json", "classify"]), 4);
    assert_eq!(run(dir.path(), &["frobnicate"]), 2);

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"law": {"xi": {"family": "exponential"}}}"#).unwrap();
    assert_eq!(run(dir.path(), &["--config", bad.to_str().unwrap(), "classify"]), 2);

    let wrong_kind = dir.path().join("kind.json");
    fs::write(&wrong_kind, r#"{"experiment": "moments"}"#).unwrap();
    assert_eq!(run(dir.path(), &["--config", wrong_kind.to_str().unwrap(), "--law", "normal", "classify"]), 2);
}

#[test]
fn shipped_configs_run() {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let dir = tempfile::tempdir().unwrap();
    let mut seen = 0;
    for entry in fs::read_dir(&configs).unwrap() {
        let path = entry.unwrap().path();
        let v = read_json(&path);
        let kind = v["experiment"].as_str().unwrap().to_string();
        let code = run(dir.path(), &["--config", path.to_str().unwrap(), "--paths", "2000", &kind]);
        assert_eq!(code, 0, "{}", path.display());
        seen += 1;
    }
    assert!(seen >= 6);
}
