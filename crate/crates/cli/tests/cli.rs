//! End-to-end command tests: exit codes, determinism of artifacts, and
//! config-file override behavior.

use std::path::Path;
use std::process::Command;

fn fbma() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fbma"))
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn invalid_radius_exits_with_configuration_code() {
    let out = tempfile::tempdir().unwrap();
    let status = fbma()
        .args(["solve-liouville", "--R", "1", "--C0", "0.4"])
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn zero_c0_exits_with_configuration_code() {
    let out = tempfile::tempdir().unwrap();
    let status = fbma()
        .args(["solve-liouville", "--R", "3", "--C0", "0"])
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn solve_then_rebuild_round_trip() {
    let solve_dir = tempfile::tempdir().unwrap();
    let status = fbma()
        .args([
            "solve-liouville",
            "--R",
            "4",
            "--C0",
            "0.45",
            "--n_r",
            "33",
            "--n_theta",
            "64",
        ])
        .arg("--out")
        .arg(solve_dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    for artifact in ["solution.csv", "report.json", "run.json"] {
        assert!(solve_dir.path().join(artifact).exists(), "{artifact}");
    }

    let rebuild_dir = tempfile::tempdir().unwrap();
    let status = fbma()
        .arg("rebuild")
        .arg("--solution")
        .arg(solve_dir.path().join("solution.csv"))
        .args(["--C0", "0.45", "--copies", "2"])
        .arg("--out")
        .arg(rebuild_dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    for artifact in [
        "mesh.obj",
        "piece.obj",
        "spheres.json",
        "flux.json",
        "decomposition.json",
        "run.json",
    ] {
        assert!(rebuild_dir.path().join(artifact).exists(), "{artifact}");
    }
    // generic parameters give a non-closing piece between two spheres
    let decomp = String::from_utf8(read(rebuild_dir.path(), "decomposition.json")).unwrap();
    assert!(decomp.contains("non-closing"));
}

#[test]
fn identical_configs_produce_byte_identical_artifacts() {
    let run = |dir: &Path| {
        let status = fbma()
            .args([
                "solve-liouville",
                "--R",
                "3.5",
                "--C0",
                "0.5",
                "--n_r",
                "17",
                "--n_theta",
                "32",
            ])
            .arg("--out")
            .arg(dir)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
    };
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run(a.path());
    run(b.path());
    for artifact in ["solution.csv", "report.json", "run.json"] {
        assert_eq!(
            read(a.path(), artifact),
            read(b.path(), artifact),
            "{artifact} differs between identical runs"
        );
    }
}

#[test]
fn sweep_is_deterministic_across_worker_counts() {
    let run = |dir: &Path, threads: &str| {
        let status = fbma()
            .env("FBMA_THREADS", threads)
            .args([
                "sweep",
                "--R-list",
                "2,3,4",
                "--C0-list",
                "0.3,0.5",
                "--n_r",
                "17",
                "--n_theta",
                "32",
            ])
            .arg("--out")
            .arg(dir)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
    };
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run(a.path(), "1");
    run(b.path(), "4");
    assert_eq!(read(a.path(), "sweep.json"), read(b.path(), "sweep.json"));
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.cfg");
    std::fs::write(&config, "R = 3\nC0 = 0.5\nn_r = 17\nn_theta = 32\n").unwrap();
    let out = tempfile::tempdir().unwrap();
    // flag overrides config R
    let status = fbma()
        .arg("--config")
        .arg(&config)
        .args(["solve-liouville", "--R", "4"])
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let manifest = String::from_utf8(read(out.path(), "run.json")).unwrap();
    assert!(manifest.contains("\"R\": 4.0"), "flag must win: {manifest}");

    // unknown config keys are rejected
    std::fs::write(&config, "R = 3\nbogus = 1\n").unwrap();
    let status = fbma()
        .arg("--config")
        .arg(&config)
        .args(["solve-liouville", "--C0", "0.5"])
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn weierstrass_eval_and_diagnose_chain() {
    let we = tempfile::tempdir().unwrap();
    let status = fbma()
        .args([
            "weierstrass-eval",
            "--dataset",
            "catenoid-annulus",
            "--n_r",
            "33",
            "--n_theta",
            "64",
        ])
        .arg("--out")
        .arg(we.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    let diag = tempfile::tempdir().unwrap();
    let status = fbma()
        .arg("diagnose")
        .arg("--patch")
        .arg(we.path().join("patch.obj"))
        .arg("--g")
        .arg(we.path().join("g.csv"))
        .args(["--hopf", "--injectivity"])
        .arg("--out")
        .arg(diag.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let hopf = String::from_utf8(read(diag.path(), "hopf.json")).unwrap();
    // C0 of the critical catenoid recovered from the OBJ round trip
    assert!(hopf.contains("0.4604"), "hopf report: {hopf}");
}

#[test]
fn pipeline_catenoid_emits_reports_and_exits_zero() {
    let out = tempfile::tempdir().unwrap();
    let output = fbma()
        .args(["pipeline-catenoid", "--n_r", "65", "--n_theta", "128"])
        .arg("--out")
        .arg(out.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", String::from_utf8_lossy(&output.stderr));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("orthogonal-spheres: PASS"));
    assert!(out.path().join("mesh.obj").exists());
    assert!(out.path().join("pipeline.json").exists());
}
