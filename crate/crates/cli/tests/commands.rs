use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const SQUARE: &str = r#"{"name": "square", "vertices": [[0,0],[4,0],[4,4],[0,4]]}"#;
const UNOTCH: &str = r#"{"name": "unotch", "vertices": [[0,0],[8,0],[8,6],[5,6],[4,2],[3,6],[0,6]]}"#;
const DOUBLE: &str =
    r#"{"name": "double", "vertices": [[0,0],[5,0],[6,4],[7,0],[8,0],[8,6],[3,6],[2,2],[1,6],[0,6]]}"#;

fn file(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monowatch")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn length_of(out: &Output, key: &str) -> f64 {
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    v[key].as_f64().unwrap()
}

#[test]
fn solve_double() {
    let dir = TempDir::new().unwrap();
    let poly = file(&dir, "double.json", DOUBLE);
    let out = run(&["solve", "--polygon", s(&poly), "--theta-deg", "0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!((length_of(&out, "length") - 4.0).abs() < 1e-9);
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"length\": 4.000000000"));
}

#[test]
fn solve_square_is_zero() {
    let dir = TempDir::new().unwrap();
    let poly = file(&dir, "square.json", SQUARE);
    let out = run(&["solve", "--polygon", s(&poly), "--theta-deg", "45"]);
    assert!(out.status.success());
    assert_eq!(length_of(&out, "length"), 0.0);
}

#[test]
fn solve_refuses_validity_event() {
    let dir = TempDir::new().unwrap();
    let poly = file(&dir, "double.json", DOUBLE);
    let out = run(&["solve", "--polygon", s(&poly), "--theta-deg", "75.9638"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("validity"), "{err}");
    assert!(err.contains("--theta-deg"), "{err}");
}

#[test]
fn malformed_input_exits_1() {
    let dir = TempDir::new().unwrap();
    let poly = file(&dir, "bad.json", r#"{"vertices": [[0,0],[1,0]"#);
    let out = run(&["solve", "--polygon", s(&poly), "--theta-deg", "10"]);
    assert_eq!(out.status.code(), Some(1));
    let poly = file(&dir, "bowtie.json", r#"{"vertices": [[0,0],[2,2],[2,0],[0,2]]}"#);
    let out = run(&["solve", "--polygon", s(&poly), "--theta-deg", "10"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn clockwise_input_is_reversed() {
    let dir = TempDir::new().unwrap();
    let poly = file(&dir, "cw.json", r#"{"vertices": [[0,0],[0,4],[4,4],[4,0]]}"#);
    let out = run(&["solve", "--polygon", s(&poly), "--theta-deg", "30"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("clockwise"));
}

#[test]
fn solve_output_verifies() {
    let dir = TempDir::new().unwrap();
    let poly = file(&dir, "double.json", DOUBLE);
    for theta in ["0", "12.5", "140"] {
        let json = dir.path().join(format!("tour{theta}.json"));
        let svg = dir.path().join("tour.svg");
        let out = run(&["solve", "--polygon", s(&poly), "--theta-deg", theta, "--json", s(&json), "--svg", s(&svg)]);
        assert!(out.status.success());
        assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
        let out = run(&["verify", "--polygon", s(&poly), "--theta-deg", theta, "--tour", s(&json)]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn solve_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let poly = file(&dir, "double.json", DOUBLE);
    let a = run(&["solve", "--polygon", s(&poly), "--theta-deg", "12.5"]);
    let b = run(&["solve", "--polygon", s(&poly), "--theta-deg", "12.5"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_rejects_point_tour() {
    let dir = TempDir::new().unwrap();
    let poly = file(&dir, "double.json", DOUBLE);
    let tour = file(&dir, "tour.json", r#"{"points": [[7,1]]}"#);
    let out = run(&["verify", "--polygon", s(&poly), "--theta-deg", "0", "--tour", s(&tour)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("blue backward"));
}

#[test]
fn verify_accepts_any_point_in_square() {
    let dir = TempDir::new().unwrap();
    let poly = file(&dir, "square.json", SQUARE);
    let tour = file(&dir, "tour.json", r#"{"points": [[1.5,3.25]]}"#);
    let out = run(&["verify", "--polygon", s(&poly), "--theta-deg", "63", "--tour", s(&tour)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn optimize_fixtures() {
    let dir = TempDir::new().unwrap();
    for (name, text) in [("square", SQUARE), ("unotch", UNOTCH), ("double", DOUBLE)] {
        let poly = file(&dir, &format!("{name}.json"), text);
        let csv = dir.path().join(format!("{name}.csv"));
        let out = run(&["optimize", "--polygon", s(&poly), "--csv", s(&csv)]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(length_of(&out, "best_length"), 0.0, "{name}");
        let csv = std::fs::read_to_string(&csv).unwrap();
        assert!(csv.starts_with("theta_deg,length\n"));
        assert!(!csv.contains('\r'));
    }
}

#[test]
fn optimize_reads_config() {
    let dir = TempDir::new().unwrap();
    let poly = file(&dir, "double.json", DOUBLE);
    let cfg = file(&dir, "cfg.toml", "samples_per_interval = 8\n");
    let out = run(&["optimize", "--polygon", s(&poly), "--config", s(&cfg)]);
    assert!(out.status.success());
    let cfg = file(&dir, "bad.toml", "samples_per_interval = 1\n");
    let out = run(&["optimize", "--polygon", s(&poly), "--config", s(&cfg)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_writes_csv() {
    let dir = TempDir::new().unwrap();
    let poly = file(&dir, "double.json", DOUBLE);
    let csv = dir.path().join("sweep.csv");
    let out = run(&["sweep", "--polygon", s(&poly), "--step-deg", "5", "--csv", s(&csv)]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "theta_deg,length");
    assert_eq!(rows.len(), 1 + 36);
    assert!(rows[1].starts_with("0.000") && rows[1].ends_with(",4.000000000"), "{}", rows[1]);
}
