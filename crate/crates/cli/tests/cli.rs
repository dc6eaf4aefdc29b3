use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .unwrap()
}

fn verify(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_verify"));
    cmd.args(args)
        .current_dir(root())
        .env_remove("FTL_VERIFY_CONFIG");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn golden_report() {
    let o = verify(&["fixtures/divisibility.ftl"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let golden = std::fs::read_to_string(root().join("fixtures/divisibility.report")).unwrap();
    assert_eq!(stdout(&o), golden);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| verify(args, &[]).status.code();
    assert_eq!(code(&["missing.ftl"]), Some(2));
    assert_eq!(
        code(&["--prover", "bogus", "fixtures/divisibility.ftl"]),
        Some(64)
    );
    assert_eq!(code(&[]), Some(64));
    assert_eq!(
        code(&["--chaining", "sometimes", "fixtures/divisibility.ftl"]),
        Some(64)
    );
    assert_eq!(code(&["--help"]), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ftl");
    std::fs::write(&bad, "Axiom. Zero is.\n").unwrap();
    let o = verify(&[bad.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.ftl:1:8: syntax error"));

    let wrong = dir.path().join("wrong.ftl");
    std::fs::write(
        &wrong,
        "Signature.\nA thing / things is a notion.\nRed is an adjective.\nZero is a constant.\n\
         \nTheorem.\nZero is red.\n",
    )
    .unwrap();
    let o = verify(&["--timeout", "1", wrong.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAILED"));
}

#[test]
fn structured_records_carry_every_field() {
    let o = verify(
        &["--format", "structured", "fixtures/divisibility.ftl"],
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    let records: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.len(), 9);
    for r in &records {
        for field in [
            "file", "line", "col", "kind", "status", "prover", "millis", "checked", "reason",
        ] {
            assert!(r.get(field).is_some(), "{field} missing in {r}");
        }
        assert_eq!(r["file"], "fixtures/divisibility.ftl");
        assert_eq!(r["checked"], true);
    }
    let by = |s: &str| records.iter().filter(|r| r["status"] == s).count();
    assert_eq!((by("verified-by-lemma"), by("verified-by-prover")), (2, 7));
}

#[test]
fn tptp_out_writes_one_file_per_task() {
    let dir = tempfile::tempdir().unwrap();
    let o = verify(
        &[
            "--tptp-out",
            dir.path().to_str().unwrap(),
            "fixtures/divisibility.ftl",
        ],
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    let listed: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(listed.len(), 9);
    for (n, path) in listed.iter().enumerate() {
        assert!(
            path.ends_with(&format!("divisibility_{:03}.p", n + 1)),
            "{path}"
        );
        let text = std::fs::read_to_string(path).unwrap();
        assert!(text.starts_with("% fixtures/divisibility.ftl:"), "{text}");
        assert_eq!(text.matches(", conjecture,").count(), 1);
    }
}

#[test]
fn config_from_environment_adds_provers() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("provers.toml");
    std::fs::write(
        &config,
        "[[prover]]\nid = \"yes\"\ncommand = \"cat {file} > /dev/null; echo '% SZS status Theorem'\"\ntimeout = 5\n",
    )
    .unwrap();
    let args = ["--prover", "yes", "fixtures/divisibility.ftl"];
    assert_eq!(verify(&args, &[]).status.code(), Some(64));
    let o = verify(&args, &[("FTL_VERIFY_CONFIG", config.to_str().unwrap())]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).contains("verified (yes"), "{}", stdout(&o));

    let explicit = verify(
        &[
            "--config",
            config.to_str().unwrap(),
            "--prover",
            "yes",
            "fixtures/divisibility.ftl",
        ],
        &[],
    );
    assert_eq!(explicit.status.code(), Some(0));
}

#[test]
fn dump_writes_the_prepared_tasks() {
    let dir = tempfile::tempdir().unwrap();
    let o = verify(
        &[
            "--dump",
            dir.path().to_str().unwrap(),
            "fixtures/divisibility.ftl",
        ],
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    let dumped = dir.path().join("divisibility");
    assert!(dumped.exists(), "nothing dumped under {}", dumped.display());
}
