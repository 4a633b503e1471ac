use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn phasegap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phasegap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_tail(text: &str) -> serde_json::Value {
    let start = text.find('{').expect("JSON object in output");
    serde_json::from_str(&text[start..]).unwrap()
}

#[test]
fn bound_stft_anchor() {
    let out = phasegap(&["bound", "--regime", "stft", "--n", "0", "--A", "1", "--B", "1"]);
    assert!(out.status.success());
    let doc = json_tail(&stdout(&out));
    let r = doc["rMax"].as_f64().unwrap();
    assert!((r - (2.0 / std::f64::consts::PI * 5.0_f64.ln()).sqrt()).abs() < 1e-15);
    assert_eq!(doc["constant"].as_f64().unwrap(), 5.0);
    assert!(stdout(&out).starts_with("r_max = 1.0122252701121"));
}

#[test]
fn bound_wavelet_anchor() {
    let out = phasegap(&[
        "bound", "--regime", "wavelet", "--n", "0", "--alpha", "1", "--A", "1", "--B", "1", "--json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((doc["rMax"].as_f64().unwrap() - 0.980105).abs() < 1e-6);
    assert_eq!(doc["params"]["family"], "laguerre");
}

#[test]
fn bound_usage_errors() {
    let missing_alpha = phasegap(&["bound", "--regime", "wavelet", "--n", "0", "--A", "1", "--B", "1"]);
    assert_eq!(missing_alpha.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing_alpha.stderr).contains("--alpha"));
    let swapped = phasegap(&["bound", "--regime", "stft", "--A", "2", "--B", "1"]);
    assert_eq!(swapped.status.code(), Some(2));
    let unknown = phasegap(&["bound", "--regime", "gabor", "--A", "1", "--B", "1"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn verify_geometry_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("geometry.csv");
    let manifest = dir.path().join("manifest.json");
    let out = phasegap(&[
        "verify",
        "--suite",
        "geometry",
        "--seed",
        "9",
        "--out",
        csv.to_str().unwrap(),
        "--manifest",
        manifest.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("check,max_error,tolerance,pass"));
    assert!(lines.all(|l| l.ends_with(",true")));
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["command"], "verify");
    assert_eq!(m["seed"], 9);

    // same seed, same bytes
    let again = phasegap(&["verify", "--suite", "geometry", "--seed", "9"]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn verify_lemmas_passes() {
    let out = phasegap(&["verify", "--suite", "lemmas"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 4);
}

#[test]
fn certify_wavelet_sector_count() {
    let out = phasegap(&[
        "certify", "--regime", "wavelet", "--n", "1", "--alpha", "1", "--R", "0.5", "--kappa", "2", "--A", "1", "--B",
        "1", "--grid", "12",
    ]);
    assert!(out.status.success());
    let cert: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cert["partition"]["sectors"], 4);
    assert_eq!(cert["capDominates"], true);
    for key in [
        "regime",
        "params",
        "partition",
        "chainValue",
        "analyticCap",
        "sampledSup",
        "pass",
    ] {
        assert!(cert.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn certify_stft_has_five_sectors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    for r in ["0.3", "1.0", "2.5"] {
        let out = phasegap(&[
            "certify",
            "--regime",
            "stft",
            "--n",
            "2",
            "--R",
            r,
            "--A",
            "0.5",
            "--B",
            "1",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        let cert: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(cert["partition"]["sectors"], 5);
    }
}

#[test]
fn certify_rejects_out_of_range_radius() {
    let out = phasegap(&[
        "certify", "--regime", "wavelet", "--n", "0", "--alpha", "1", "--R", "1.2", "--A", "1", "--B", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = phasegap(&["certify", "--regime", "stft", "--R", "-1", "--A", "1", "--B", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.json");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn experiment_sweep_writes_rows_and_heatmaps() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"experiments": [
            {"regime": "timefreq", "atom": {"family": "hermite", "n": 0},
             "measure": {"kind": "lattice", "a": 0.5, "b": 0.5, "extent": 3},
             "dimension": 4, "holeRadii": [0.0, 0.4, 0.8]},
            {"regime": "halfplane", "atom": {"family": "laguerre", "n": 0, "alpha": 1},
             "measure": {"kind": "diskGrid", "delta": 0.3, "extent": 0.8},
             "dimension": 3, "holeRadii": [0.0, 0.3]}
        ]}"#,
    );
    let out_dir = dir.path().join("out");
    let out = phasegap(&[
        "experiment",
        "--config",
        &config,
        "--out-dir",
        out_dir.to_str().unwrap(),
        "--heatmap",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = fs::read_to_string(out_dir.join("reports.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(
        rows[0],
        "regime,n,alpha,a,b,delta,extent,N,R,A_est,B_est,R_max,consistent"
    );
    assert_eq!(rows.len(), 6);
    assert!(rows[1..].iter().all(|r| r.ends_with(",true")));

    let reports: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("reports.json")).unwrap()).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 5);
    assert!(reports[0]["caveat"].as_str().unwrap().contains("finite section"));

    for i in 0..5 {
        let svg = fs::read_to_string(out_dir.join(format!("heatmap_{i:03}.svg"))).unwrap();
        assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<svg").count(), 1);
        assert_eq!(
            svg.matches("<rect").count(),
            svg.matches("/>").count() - svg.matches("<circle").count()
        );
    }
    let svg = fs::read_to_string(out_dir.join("heatmap_002.svg")).unwrap();
    assert!(svg.contains(r##"stroke="#e31a1c""##), "hole outline drawn");

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "experiment");
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 7);

    // a second run reproduces every file
    let again_dir = dir.path().join("again");
    let again = phasegap(&[
        "experiment",
        "--config",
        &config,
        "--out-dir",
        again_dir.to_str().unwrap(),
        "--heatmap",
    ]);
    assert!(again.status.success());
    for name in ["reports.json", "reports.csv", "heatmap_004.svg"] {
        assert_eq!(
            fs::read(out_dir.join(name)).unwrap(),
            fs::read(again_dir.join(name)).unwrap()
        );
    }
}

#[test]
fn experiment_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let missing = phasegap(&[
        "experiment",
        "--config",
        "/nonexistent/cfg.json",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(missing.status.code(), Some(2));
    let config = write_config(dir.path(), r#"{"regime": "timefreq"}"#);
    let malformed = phasegap(&[
        "experiment",
        "--config",
        &config,
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(malformed.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&malformed.stderr).contains("config"));
}

#[test]
fn thread_cap_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_phasegap"))
        .args(["bound", "--regime", "stft", "--A", "1", "--B", "1"])
        .env("PHASEGAP_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_phasegap"))
        .args(["bound", "--regime", "stft", "--A", "1", "--B", "1"])
        .env("PHASEGAP_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
}
