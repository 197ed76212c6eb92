use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn qwhash(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qwhash"))
        .args(args)
        .env_remove("QWHASH_INSTANCE")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SMALL: &[&str] = &["--n", "9", "--msg-bits", "128", "--trials", "12"];

fn small_run(cmd: &str, dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--out-dir", dir.to_str().unwrap()];
    args.extend_from_slice(SMALL);
    args.extend_from_slice(extra);
    qwhash(&args, b"")
}

#[test]
fn empty_stdin_pretty() {
    let o = qwhash(&["hash", "--pretty"], b"");
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let groups: Vec<&str> = text.split_whitespace().collect();
    assert_eq!(groups.len(), 37);
    assert!(groups.iter().all(|g| *g == "00"));
}

#[test]
fn hash_file_matches_vectors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("abc.txt");
    fs::write(&path, b"abc").unwrap();
    let golden: serde_json::Value =
        serde_json::from_str(include_str!("../../core/tests/data/vectors.json")).unwrap();
    for (i, inst) in ["296", "QHFM-P-264"].iter().enumerate() {
        let o = qwhash(&["hash", "--instance", inst, path.to_str().unwrap()], b"");
        assert_eq!(o.status.code(), Some(0));
        let want = golden["instances"][i]["vectors"][1]["digest"]
            .as_str()
            .unwrap();
        assert_eq!(stdout(&o).trim(), want);
    }
    let o = qwhash(&["hash", "-"], b"abc");
    assert_eq!(
        stdout(&o).trim(),
        golden["instances"][0]["vectors"][1]["digest"]
            .as_str()
            .unwrap()
    );
}

#[test]
fn instance_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_qwhash"))
        .args(["hash", "/dev/null"])
        .env("QWHASH_INSTANCE", "264")
        .output()
        .unwrap();
    assert_eq!(stdout(&o).trim(), "0".repeat(66));
}

#[test]
fn exit_codes() {
    let o = qwhash(&["hash", "--instance", "QHFM-P-999"], b"");
    assert_eq!(o.status.code(), Some(2));
    let o = qwhash(&["hash", "--n", "4"], b"");
    assert_eq!(o.status.code(), Some(2));
    let o = qwhash(&["frobnicate"], b"");
    assert_eq!(o.status.code(), Some(2));
    let o = qwhash(&["hash", "/definitely/not/here"], b"");
    assert_eq!(o.status.code(), Some(1));
    let o = qwhash(
        &["test-diffusion", "--dataset", "/definitely/not/here.jsonl"],
        b"",
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn params_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    fs::write(
        &path,
        r#"{"schema_version":1,"n":5,"m":8,"l":8,"theta0":"pi/4","theta1":"pi/3","alpha":"pi/4"}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let a = qwhash(&["hash", "--params", p], b"abc");
    let b = qwhash(&["hash", "--n", "5"], b"abc");
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a).trim().len(), 10);
    let c = qwhash(&["hash", "--params", p, "--theta0", "7pi/60"], b"abc");
    assert_ne!(stdout(&a), stdout(&c));
}

#[test]
fn seeded_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let o = small_run("test-diffusion", d, &["--seed", "5"]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    for f in [
        "diffusion.json",
        "diffusion.trials.csv",
        "diffusion.positions.csv",
    ] {
        assert_eq!(
            fs::read(a.join(f)).unwrap(),
            fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(a.join("diffusion.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 5);
    assert_eq!(report["trials"], 12);
    assert_eq!(report["params"]["n"], 9);
}

#[test]
fn omitted_seed_is_recorded_and_replayable() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let o = small_run("test-uniform", &first, &[]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(first.join("uniform.json")).unwrap()).unwrap();
    let seed = report["seed"].as_u64().unwrap();
    assert!(stdout(&o).contains(&format!("seed={seed}")));

    let replay = dir.path().join("replay");
    let o = small_run("test-uniform", &replay, &["--seed", &seed.to_string()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        fs::read(first.join("uniform.json")).unwrap(),
        fs::read(replay.join("uniform.json")).unwrap()
    );
}

#[test]
fn statistical_outcome_does_not_change_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    // One trial leaves the spread undefined, which fails its band.
    let args = [
        "test-diffusion",
        "--out-dir",
        dir.path().to_str().unwrap(),
        "--n",
        "9",
        "--msg-bits",
        "64",
        "--trials",
        "1",
        "--seed",
        "1",
    ];
    let o = qwhash(&args, b"");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("undefined"));
    let mut with_assert = args.to_vec();
    with_assert.push("--assert");
    let o = qwhash(&with_assert, b"");
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL]"));
}

#[test]
fn collision_and_sensitivity_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = small_run("test-collision", dir.path(), &["--seed", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("D_KL"));

    let o = small_run("test-sensitivity", dir.path(), &["--seed", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("H(msg3)"));
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("sensitivity.json")).unwrap()).unwrap();
    assert_eq!(
        report["sensitivity"]["js_per_trial"]
            .as_array()
            .unwrap()
            .len(),
        12
    );
    let positions = fs::read_to_string(dir.path().join("sensitivity.positions.csv")).unwrap();
    assert_eq!(positions.lines().count(), 1 + 9 * 8);
}

#[test]
fn dataset_source() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("abstracts.jsonl");
    fs::write(
        &data,
        "{\"abstract\": \"walks on cycles\"}\n\n{\"title\": \"no abstract\"}\n{\"abstract\": \"memory coins\"}\n",
    )
    .unwrap();
    let o = small_run(
        "test-diffusion",
        dir.path(),
        &["--seed", "3", "--dataset", data.to_str().unwrap()],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("diffusion.json")).unwrap()).unwrap();
    assert_eq!(report["source"]["kind"], "dataset");
    assert_eq!(report["source"]["records"], 2);
}

#[test]
fn sweep_writes_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = small_run("sweep", dir.path(), &["--seed", "4", "--k", "10,20"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    let grid: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("sweep.json")).unwrap()).unwrap();
    assert_eq!(grid["cells"].as_array().unwrap().len(), 4);
    assert_eq!(grid["grid"]["ks"], serde_json::json!([10, 20]));
}

#[test]
fn vectors_match_frozen_file() {
    let o = qwhash(&["vectors"], b"");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        include_str!("../../core/tests/data/vectors.json")
    );
}

#[test]
fn bench_json() {
    let o = qwhash(
        &[
            "bench",
            "--lengths",
            "200,400",
            "--reps",
            "1",
            "--compare-n",
            "33",
            "--json",
        ],
        b"",
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 3);
    assert_eq!(points[2]["n"], 33);
    assert!(v["slope_seconds_per_bit"].as_f64().is_some());
}
