use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, sub: &str, config: &str, extra: &[&str]) -> Output {
    let cfg = dir.join(format!("{sub}.toml"));
    fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_diracspec"))
        .arg(sub)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .args(extra)
        .output()
        .unwrap()
}

fn manifest(dir: &Path, sub: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("out").join(sub).join("manifest.json")).unwrap()).unwrap()
}

fn csv_rows(path: PathBuf) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn region_quarter_flux_row() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), "region", "[experiment]\nalphas = [0.25, 0.5]\nnus = [-0.5]\n", &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = csv_rows(dir.path().join("out/region/alpha.csv"));
    let quarter = &rows[0];
    assert_eq!(quarter[0].parse::<f64>().unwrap(), 0.25);
    assert_eq!(quarter[1].parse::<f64>().unwrap(), 8.0);
    assert_eq!(quarter[2].parse::<f64>().unwrap(), 3.0);
    assert_eq!(rows[1][3], "true");
    let nu = csv_rows(dir.path().join("out/region/nu.csv"));
    assert_eq!(nu[0][2].parse::<f64>().unwrap(), 3.0 / (1.0 - 0.75f64.sqrt()));
}

#[test]
fn verify_free_3d_defaults_pass() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), "verify", "[model]\nn = 3\n", &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let m = manifest(dir.path(), "verify");
    assert_eq!(m["summary"]["status"], "pass");
    assert!(m["summary"]["hard_checks"].as_u64().unwrap() >= 20);
    let names: Vec<&str> = m["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    for needle in ["eigen residual", "residual halving ratio", "round trip", "diagonalization", "spectral conservation", "weight identity"] {
        assert!(names.contains(&needle), "{needle} missing");
    }
}

#[test]
fn zero_datum_transforms_to_zero() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), "transform", "[model]\nn = 2\n[grids]\nk_max = 0\n[experiment.datum]\namplitude = 0.0\n", &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for (file, first_value) in [("spectrum.csv", 9), ("radial.csv", 7)] {
        let rows = csv_rows(dir.path().join("out/transform").join(file));
        assert!(!rows.is_empty());
        for row in rows {
            assert!(row[first_value..].iter().all(|v| v.parse::<f64>().unwrap() == 0.0), "{file}: {row:?}");
        }
    }
}

#[test]
fn schema_violations_are_all_listed() {
    let dir = tempfile::tempdir().unwrap();
    let text = "seed = \"x\"\nextra = 1\n[model]\nn = 5\npotential = \"coulomb\"\n[experiment]\ntimes = \"soon\"\n";
    let o = run(dir.path(), "evolve", text, &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    for needle in ["extra", "seed", "model.n", "model.coupling", "experiment.times"] {
        assert!(err.contains(needle), "{needle} not reported: {err}");
    }
    assert!(!dir.path().join("out").exists());
    let o = run(dir.path(), "verify", "", &[]);
    assert_eq!(o.status.code(), Some(2), "verify needs a model");
}

#[test]
fn failed_assertion_exits_one_with_record() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), "transform", "[model]\nn = 2\n[grids]\nk_max = 0\n[experiment]\ntolerance = 1e-30\n", &[]);
    assert_eq!(o.status.code(), Some(1));
    let m = manifest(dir.path(), "transform");
    assert_eq!(m["summary"]["status"], "fail");
    assert!(!m["failures"].as_array().unwrap().is_empty());
}

#[test]
fn reruns_are_byte_identical() {
    let config = "seed = 11\n[experiment]\nmodulations = 2\nradii = [-8, -5]\ncn_high = [3, 6]\ncn_low = [-6, -3]\n";
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let c = tempfile::tempdir().unwrap();
    for (dir, extra) in [(&a, &[][..]), (&b, &["--threads", "1"][..]), (&c, &["--seed", "12"][..])] {
        let o = run(dir.path(), "bench-localized", config, extra);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    }
    let files = ["fits.csv", "samples.csv", "reports.json", "manifest.json"];
    let read = |d: &tempfile::TempDir, f: &str| fs::read(d.path().join("out/bench-localized").join(f)).unwrap();
    for f in files {
        assert_eq!(read(&a, f), read(&b, f), "{f} differs between reruns");
    }
    assert_ne!(read(&a, "samples.csv"), read(&c, "samples.csv"), "the seed should change the profiles");
}

#[test]
fn exploratory_pairs_do_not_gate() {
    let dir = tempfile::tempdir().unwrap();
    let config = "[model]\nn = 2\npotential = \"aharonov-bohm\"\ncoupling = 0.25\n[experiment]\nmembers = 2\nwindow = 16\npairs = [[inf, 2], [inf, 12]]\n";
    let o = run(dir.path(), "scan-strichartz", config, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let rows = csv_rows(dir.path().join("out/scan-strichartz/spreads.csv"));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][7], "false", "(inf, 12) lies outside the region for alpha = 1/4");
    let m = manifest(dir.path(), "scan-strichartz");
    let exploratory = m["checks"].as_array().unwrap().iter().find(|c| c["name"] == "spread (p,q)=(inf,12)").unwrap();
    assert_eq!(exploratory["hard"], false);
}
