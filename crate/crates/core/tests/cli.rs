use std::path::PathBuf;
use std::process::{Command, Output};

fn model(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models").join(name)
}

fn qmix(args: &[&str], out: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmix"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

#[test]
fn gap_of_depolarizing_qubit() {
    let dir = tempfile::tempdir().unwrap();
    let m = model("depolarizing_qubit.json");
    let out = qmix(&["gap", m.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["lambda"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(dir.path().join("depolarizing_qubit.gap.0.json").exists());
}

#[test]
fn steady_on_dephasing_qubit_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let m = model("dephasing_qubit.json");
    let out = qmix(&["steady", m.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NotPrimitive"));
}

#[test]
fn model_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"id\": \"x\", \"kind\": \"spin\",\n \"lattice\": {\"extents\": [0]}}").unwrap();
    let out = qmix(&["gap", bad.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lattice.extents"));

    std::fs::write(&bad, "{\"id\": \"x\",\n \"kind\": }").unwrap();
    let out = qmix(&["gap", bad.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let missing = dir.path().join("missing.json");
    let out = qmix(&["gap", missing.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));

    let m = model("depolarizing_qubit.json");
    let out = qmix(&["gap", m.to_str().unwrap(), "--tol", "bogus=1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = qmix(&["fermion-steady", m.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn clustering_is_deterministic() {
    let m = model("davies_chain6.json");
    let mut csv = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        let out = qmix(
            &["clustering", m.to_str().unwrap(), "--seed", "7", "--tol", "velocity=5.8", "--format", "csv"],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        csv.push(std::fs::read(dir.path().join("davies_chain6.clustering_C.7.csv")).unwrap());
        let json: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("davies_chain6.clustering_C.7.json")).unwrap())
                .unwrap();
        assert_eq!(json["seed"], 7);
        assert_eq!(json["passed"], true);
    }
    assert_eq!(csv[0], csv[1]);
}

#[test]
fn fermion_commands() {
    let dir = tempfile::tempdir().unwrap();
    let m = model("fermion_pair.json");
    let out = qmix(&["fermion-steady", m.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["lyapunov_residual"].as_f64().unwrap() < 1e-10);
    let out = qmix(&["fermion-mi", m.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["mutual_info_bits"].as_f64().unwrap() >= 0.0);
}
