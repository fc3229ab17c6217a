use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn specrange(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specrange")).args(args).output().unwrap()
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn range_of_defective_example_is_disk_hull() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "t.json", "[[2,1],[0,0]]");
    let out = specrange(&["range", "--matrix", &m]);
    assert!(out.status.success());
    let v = lines(&out);
    assert_eq!(v[0]["command"], "range");
    assert_eq!(v[0]["config"]["seed"], 0);
    let region = &v[1]["region"];
    let angles = region["angles"].as_array().unwrap();
    let radii = region["radii"].as_array().unwrap();
    assert_eq!(angles.len(), 360);
    for (a, r) in angles.iter().zip(radii) {
        let theta = a.as_f64().unwrap();
        let expected = (2.0 * theta.cos()).max(1.0);
        assert!((r.as_f64().unwrap() - expected).abs() < 1e-12, "theta {theta}");
    }
}

#[test]
fn range_writes_svg() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "t.json", r#"{"n":2,"entries":[[1,0],[0,1],[0,0],[-1,0]]}"#);
    let svg = dir.path().join("v.svg");
    let out = specrange(&["range", "--matrix", &m, "--norm", "l2", "--svg", svg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let body = std::fs::read_to_string(Path::new(&svg)).unwrap();
    assert!(body.starts_with("<svg") && body.contains("<polygon"));
}

#[test]
fn shapiro_pair_has_sign_entries() {
    let out = specrange(&["shapiro", "--k", "3"]);
    let v = lines(&out);
    for key in ["p", "q"] {
        let s = v[1][key].as_array().unwrap();
        assert_eq!(s.len(), 8);
        assert!(s.iter().all(|x| x.as_i64().unwrap().abs() == 1));
    }
    let sup = v[1]["sup_p"].as_f64().unwrap();
    assert!(sup <= 2f64.sqrt() * 8f64.sqrt() + 1e-12);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let broken = write(&dir, "broken.json", "[[1,2],");
    let ragged = write(&dir, "ragged.json", "[[1,2]]");
    let good = write(&dir, "good.json", "[[1]]");
    for args in [
        vec!["range", "--matrix", broken.as_str()],
        vec!["range", "--matrix", ragged.as_str()],
        vec!["range", "--matrix", good.as_str(), "--norm", "l3"],
        vec!["range", "--matrix", good.as_str(), "--grid", "3"],
        vec!["psi", "--matrix", good.as_str(), "--degree", "0"],
    ] {
        let out = specrange(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn schreier_experiment_reports_growth() {
    let out = specrange(&["schreier", "--experiment", "n=15"]);
    assert!(out.status.success());
    let v = lines(&out);
    assert_eq!(v[1]["details"][0]["schreier_norm"].as_f64(), Some(16.0));
    assert_eq!(v[1]["satisfied"], true);
}

#[test]
fn schreier_norm_of_vector() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.json", r#"{"pairs":[[1,[1,0]],[2,[1,0]],[3,[0,1]]]}"#);
    let out = specrange(&["schreier", "--vector", &x]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = lines(&out);
    assert_eq!(v[1]["schreier_norm"].as_f64(), Some(2.0));
    assert_eq!(v[1]["l1_norm"].as_f64(), Some(3.0));
}

#[test]
fn psi_reports_bound_and_witness() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "t.json", "[[2,1],[0,0]]");
    let out = specrange(&["psi", "--matrix", &m, "--degree", "8", "--budget", "100", "--seed", "3"]);
    assert!(out.status.success());
    let v = lines(&out);
    assert_eq!(v[0]["config"]["seed"], 3);
    let lb = v[1]["lower_bound"].as_f64().unwrap();
    assert!(lb > 1.1 && lb < 13.0);
    let coeffs = v[1]["witness"]["coeffs"].as_array().unwrap();
    assert!(!coeffs.is_empty() && coeffs.len() <= 9);
}

#[test]
fn radius_of_rotation_is_one() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "t.json", "[[0,-1],[1,0]]");
    let out = specrange(&["radius", "--matrix", &m, "--norm", "l2"]);
    assert!(out.status.success());
    let v = lines(&out);
    let nu = v[1]["numerical_radius"].as_f64().unwrap();
    assert!((nu - 1.0).abs() < 1e-9);
    assert!((v[1]["operator_norm"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn verify_single_suite_passes() {
    let out = specrange(&["verify", "--suite", "schreier"]);
    assert_eq!(out.status.code(), Some(0));
    let v = lines(&out);
    assert!(v.len() >= 2);
    assert!(v[1..].iter().all(|r| r["satisfied"] == true));
}
