use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use thinspec::harness::family::random_hull;
use thinspec::harness::{self, Config, FamilyKind, FamilySpec};

fn thinspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thinspec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn small_config() -> Config {
    Config {
        families: vec![FamilySpec {
            kind: FamilyKind::RightTriangle,
            eps: vec![0.1, 0.02],
            seeds: vec![],
        }],
        kmax: 3,
        target_h: 0.05,
        segment_nodes: 400,
        concave_profiles: 2,
        smooth_profiles: vec!["constant".into(), "cap".into()],
        dn_subdomains: 2,
        scaling: harness::ScalingConfig {
            families: vec![FamilyKind::RightTriangle],
            eps: vec![0.02, 0.01],
            ..Default::default()
        },
        ..Config::default()
    }
}

#[test]
fn random_hull_seed7_matches_golden() {
    let (poly, seed) = random_hull(0.05, 7).unwrap();
    let got: Vec<[f64; 2]> = poly.vertices().iter().map(|v| [v.x, v.y]).collect();
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/random_hull_eps0.05_seed7.json");
    if std::env::var_os("THINSPEC_BLESS").is_some() {
        std::fs::write(&path, serde_json::to_string_pretty(&serde_json::json!({ "seed": seed, "vertices": got })).unwrap())
            .unwrap();
    }
    let golden: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(golden["seed"], seed);
    let want: Vec<[f64; 2]> = serde_json::from_value(golden["vertices"].clone()).unwrap();
    assert_eq!(got, want);
}

#[test]
fn constants_block() {
    let v = json(&thinspec(&["constants", "--dim", "2", "--kmax", "3"]));
    for key in ["x_m", "C_n", "eps_k", "delta_n", "manifold_c", "kroger"] {
        assert!(!v[key].is_null(), "missing {key}");
    }
    assert_eq!(v["eps_k"].as_array().unwrap().len(), 3);
    let c2 = v["C_n"]["value"].as_f64().unwrap();
    assert!((c2 - 0.402_759_395_702_553).abs() < 1e-12);
}

#[test]
fn geom_accepts_both_polygon_formats() {
    let dir = tempfile::tempdir().unwrap();
    let text = write(dir.path(), "tri.txt", "0 0\n2 0\n2 0.2\n");
    let js = write(dir.path(), "tri.json", r#"{"vertices": [[0,0],[2,0],[2,0.2]]}"#);
    let a = json(&thinspec(&["geom", "--poly", text.to_str().unwrap()]));
    let b = json(&thinspec(&["geom", "--poly", js.to_str().unwrap()]));
    assert_eq!(a, b);
    let w = a["normalized"]["width"].as_f64().unwrap();
    let d = 2.0f64.hypot(0.2);
    assert!((w - 0.4 / d / d).abs() < 1e-12);
    assert_eq!(a["profile_concave"], true);
}

#[test]
fn eigs2d_mixed_rectangle_and_mesh_dump() {
    let dir = tempfile::tempdir().unwrap();
    let poly = write(dir.path(), "rect.txt", "0 0\n1 0\n1 0.25\n0 0.25\n");
    let mesh = dir.path().join("mesh.txt");
    let v = json(&thinspec(&[
        "eigs2d",
        "--poly",
        poly.to_str().unwrap(),
        "--h",
        "0.05",
        "--m",
        "1",
        "--dirichlet",
        "up",
        "--mesh-out",
        mesh.to_str().unwrap(),
    ]));
    assert_eq!(v["kind"], "mixed");
    assert_eq!(v["dirichlet_sides"], serde_json::json!([2]));
    let exact = std::f64::consts::PI.powi(2) / (4.0 * 0.0625);
    let got = v["eigenvalues"][0].as_f64().unwrap();
    assert!((got - exact).abs() <= v["error_estimates"][0].as_f64().unwrap() + 1e-9);
    assert!(std::fs::read_to_string(&mesh).unwrap().starts_with("# thinspec mesh v1"));

    let by_index = json(&thinspec(&["eigs2d", "--poly", poly.to_str().unwrap(), "--h", "0.05", "--m", "1", "--dirichlet", "2"]));
    assert_eq!(by_index["eigenvalues"], v["eigenvalues"]);
    let bad = thinspec(&["eigs2d", "--poly", poly.to_str().unwrap(), "--dirichlet", "7"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn eigs1d_profile_and_analytic() {
    let dir = tempfile::tempdir().unwrap();
    let prof = write(dir.path(), "lin.txt", "0 0\n1 2\n");
    let a = json(&thinspec(&["eigs1d", "--profile", prof.to_str().unwrap(), "--m", "2", "--nodes", "500"]));
    let b = json(&thinspec(&["eigs1d", "--analytic", "linear", "--m", "2", "--nodes", "500"]));
    assert_eq!(a["eigenvalues"], b["eigenvalues"]);
    let mu1 = a["eigenvalues"][1].as_f64().unwrap();
    assert!((mu1 - 3.831_705_970_207_512f64.powi(2)).abs() < 1e-4);
}

#[test]
fn exit_codes() {
    assert_eq!(thinspec(&["eigs1d"]).status.code(), Some(2));
    assert_eq!(thinspec(&["bogus"]).status.code(), Some(2));
    assert_eq!(thinspec(&["eigs1d", "--analytic", "nope"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", r#"{"kmax": 3, "colour": "red"}"#);
    let out = thinspec(&["sweep", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json") && err.contains("colour"), "{err}");

    // the mesher refuses meshes above its node budget
    let sq = write(dir.path(), "sq.txt", "0 0\n1 0\n1 1\n0 1\n");
    let out = thinspec(&["eigs2d", "--poly", sq.to_str().unwrap(), "--h", "0.001"]);
    assert_eq!(out.status.code(), Some(3));

    let missing = thinspec(&["report", "--out", dir.path().join("nowhere").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn sweep_outputs_are_complete_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", &serde_json::to_string(&small_config()).unwrap());
    let runs: Vec<PathBuf> = (0..2).map(|i| dir.path().join(format!("run{i}"))).collect();
    for out in &runs {
        let o = thinspec(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--jobs", "1"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = std::fs::read(runs[0].join("report.json")).unwrap();
    let b = std::fs::read(runs[1].join("report.json")).unwrap();
    assert!(a == b, "report.json differs between runs");

    let report: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(report["bodies"].as_array().unwrap().len(), 2);
    assert_eq!(report["summary"]["pass"], true);
    let csv = std::fs::read_to_string(runs[0].join("rows.csv")).unwrap();
    assert!(csv.starts_with("section,subject,check,k,kind,label,lhs,relation,rhs,margin,tolerance,holds,deviation"));
    let meta: Value = serde_json::from_slice(&std::fs::read(runs[0].join("metadata.json")).unwrap()).unwrap();
    assert!(meta["elapsed_seconds"].as_f64().unwrap() > 0.0);
    let plot = std::fs::read_to_string(runs[0].join("plots/mu1_gap_right-triangle.dat")).unwrap();
    assert_eq!(plot.lines().filter(|l| !l.starts_with('#')).count(), 2);

    let summary = json(&thinspec(&["report", "--out", runs[0].to_str().unwrap()]));
    assert_eq!(summary["failures"], 0);
}

#[test]
fn compare_one_polygon() {
    let dir = tempfile::tempdir().unwrap();
    let poly = write(dir.path(), "hull.txt", "0 0\n1 0.01\n0.9 0.04\n0.2 0.03\n");
    let cfg = write(dir.path(), "cfg.json", &serde_json::to_string(&small_config()).unwrap());
    let v = json(&thinspec(&["compare", "--poly", poly.to_str().unwrap(), "--config", cfg.to_str().unwrap()]));
    let body = &v[0];
    assert_eq!(body["name"], "hull");
    assert_eq!(body["hypothesis_deviation"], "non_C1_boundary");
    let rows = body["rows"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["check"] == "sandwich_upper"));
    assert!(rows.iter().all(|r| r["lhs"].is_number() && r["rhs"].is_number() && r["tolerance"].is_number()));
}

#[test]
fn single_family_subset_report() {
    let cfg = small_config();
    let r = harness::run_all(&cfg).unwrap();
    assert_eq!(r.bodies.len(), 2);
    assert!(r.bodies.iter().all(|b| b.family == FamilyKind::RightTriangle));
    assert_eq!(r.concave_profiles.len(), 2);
    assert_eq!(r.liouville.len(), 2);
    assert_eq!(r.dirichlet_neumann.subdomains.len(), 2);
    assert_eq!(r.exit_code(), 0);
    let thin = &r.bodies[1];
    assert!(thin.width < 1.0 / 40.0);
    assert!(thin.rows.iter().any(|row| row.check == "vertical_derivative"));
    assert!(thin.eta.is_some());
}
