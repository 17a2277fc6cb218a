use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use mylar_core::action::{classify_region, MotionConstants};
use mylar_core::dynamics::PotentialModel;
use mylar_core::quadrature::QuadratureControls;
use mylar_core::verify::compare_point;
use mylar_core::BalloonParams;
use serde_json::Value;

fn mylar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mylar")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = mylar(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    mylar(args).status.code().unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

/// Data rows of a CSV with a `# config` line and a column header.
fn csv_rows(text: &str) -> (Value, Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let config = serde_json::from_str(lines.next().unwrap().strip_prefix("# ").unwrap()).unwrap();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (config, header, rows)
}

fn col(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn exit_codes_follow_the_error_kind() {
    assert_eq!(code(&["geometry", "--r", "-1"]), 2);
    assert_eq!(code(&["actions", "--potential", "harmonic", "--kappa", "0"]), 2);
    assert_eq!(code(&["actions", "--alpha", "1"]), 2);
    assert_eq!(code(&["simulate", "--energy", "1", "--pu0", "0.5"]), 2);
    assert_eq!(code(&["actions", "--energy", "-1", "--l", "1"]), 3);
    assert_eq!(code(&["simulate", "--energy", "0.1", "--l", "1"]), 3);
    assert_eq!(code(&["geometry", "--out", "/nonexistent-dir/mesh.csv"]), 4);
    assert_eq!(code(&["actions", "--config", "/nonexistent-dir/run.json"]), 4);
    assert_eq!(code(&["quantize", "--n", "1.5"]), 2);
}

#[test]
fn geometry_single_node_is_the_equator() {
    let (config, header, rows) = csv_rows(&ok(&["geometry", "--nu", "1", "--nv", "1", "--u-min", "0", "--u-max", "0"]));
    assert_eq!(config["command"], "geometry");
    assert_eq!(header, ["u", "v", "x", "y", "z", "K"]);
    assert_eq!(rows.len(), 1);
    let vals: Vec<f64> = rows[0].iter().map(|x| x.parse().unwrap()).collect();
    assert_eq!(vals, [0.0, 0.0, 1.0, 0.0, 0.0, 2.0]);
}

#[test]
fn geometry_grid_shape_and_symmetry() {
    let (_, header, rows) = csv_rows(&ok(&["geometry", "--nu", "9", "--nv", "5", "--r", "1.7"]));
    assert_eq!(rows.len(), 45);
    let u = col(&header, &rows, "u");
    let z = col(&header, &rows, "z");
    for (i, (ui, zi)) in u.iter().zip(&z).enumerate() {
        let j = rows.iter().position(|r| r[0].parse::<f64>().unwrap() == -ui && r[1] == rows[i][1]).unwrap();
        assert!((z[j] + zi).abs() < 1e-11, "z is not odd at u = {ui}");
    }
    let json = json(&["geometry", "--nu", "3", "--nv", "2", "--format", "json"]);
    assert_eq!(json["rows"].as_array().unwrap().len(), 6);
    assert_eq!(json["config"]["nu"], 3);
}

#[test]
fn equatorial_orbit_keeps_its_invariants() {
    let text = ok(&["simulate", "--energy", "0.5", "--l", "1", "--s", "0", "--t-end", "20"]);
    let (config, header, rows) = csv_rows(&text);
    assert_eq!(config["u0"], 0.0);
    assert!(rows.len() > 2);
    assert!(col(&header, &rows, "u").iter().all(|u| *u == 0.0));
    let h = col(&header, &rows, "H");
    assert!(h.iter().all(|x| (x - 0.5).abs() < 1e-8));
    assert!(col(&header, &rows, "p_v").iter().all(|x| *x == 1.0));
    assert!(col(&header, &rows, "p_psi").iter().all(|x| *x == 0.0));
    let t = col(&header, &rows, "t");
    assert_eq!(*t.last().unwrap(), 20.0);
}

#[test]
fn simulate_json_reports_drifts() {
    let v = json(&[
        "simulate", "--potential", "harmonic", "--energy", "1.6", "--l", "0.7", "--s", "0.4", "--u0", "0.1", "--t-end",
        "10", "--format", "json", "--record-every", "10",
    ]);
    assert!(v["max_energy_drift"].as_f64().unwrap() < 1e-7);
    assert_eq!(v["max_p_v_drift"].as_f64().unwrap(), 0.0);
    assert!(!v["samples"].as_array().unwrap().is_empty());
}

#[test]
fn degenerate_orbit_has_zero_action() {
    let v = json(&["actions", "--energy", "0.5", "--l", "1", "--s", "0"]);
    assert_eq!(v["ju_quadrature"].as_f64().unwrap(), 0.0);
    assert_eq!(v["status"], "ok");
}

#[test]
fn actions_match_the_library_bit_for_bit() {
    let v = json(&["actions", "--energy", "1", "--l", "1", "--s", "0"]);
    let c = MotionConstants::new(1.0, 1.0, 0.0);
    let row = compare_point(&c, &PotentialModel::Geodetic, &BalloonParams::default(), None, &QuadratureControls::default());
    assert_eq!(v["ju_quadrature"].as_f64().unwrap().to_bits(), row.ju_quadrature.unwrap().to_bits());
    assert_eq!(v["ju_closed_form"].as_f64().unwrap().to_bits(), row.ju_closed_form.unwrap().to_bits());
    assert_eq!(v["region"], Value::Null);

    let v = json(&["actions", "--potential", "harmonic", "--energy", "2", "--l", "0.6", "--s", "-0.3"]);
    let (jv, jp) = (v["j_v"].as_f64().unwrap(), v["j_psi"].as_f64().unwrap());
    assert_eq!(v["region"].as_str().unwrap(), classify_region(jv, jp).unwrap().label());
}

#[test]
fn sweep_is_reproducible_and_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let args = |path: &Path| {
        vec![
            "sweep".to_string(),
            "--e-min".into(),
            "1".into(),
            "--e-max".into(),
            "3".into(),
            "--e-count".into(),
            "3".into(),
            "--l".into(),
            "0.8".into(),
            "--s".into(),
            "0.3".into(),
            "--out".into(),
            path.display().to_string(),
        ]
    };
    let a: Vec<String> = args(&out);
    ok(&a.iter().map(String::as_str).collect::<Vec<_>>());
    let first = fs::read(&out).unwrap();
    let (_, header, rows) = csv_rows(std::str::from_utf8(&first).unwrap());
    assert_eq!(rows.len(), 3);
    let closed = col(&header, &rows, "Ju_closed_form");
    assert!(closed.iter().all(|c| *c == closed[0]));
    let quad = col(&header, &rows, "Ju_quadrature");
    assert!(quad.windows(2).all(|w| w[1] > w[0]));

    let summary: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("sweep.csv.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["n_rows"], 3);
    assert!(summary["n_admissible"].as_u64().unwrap() <= 3);

    ok(&a.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(fs::read(&out).unwrap(), first);
}

#[test]
fn quantized_radius() {
    let v = json(&["quantize", "--n", "1"]);
    assert!((v["r"].as_f64().unwrap() - 0.797_884_560_802_865_4).abs() < 1e-15);
    assert!((v["check"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(code(&["quantize", "--n", "0"]), 2);
    assert_eq!(code(&["quantize"]), 2);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"potential": "harmonic", "kappa": 2.0, "energy": 3.0, "l": 0.5, "s": 0.2}"#).unwrap();
    let path = cfg.display().to_string();
    let v = json(&["actions", "--config", &path, "--energy", "4"]);
    assert_eq!(v["config"]["energy"], 4.0);
    assert_eq!(v["config"]["kappa"], 2.0);
    assert_eq!(v["energy"], 4.0);

    fs::write(&cfg, r#"{"radius": 2.0}"#).unwrap();
    assert_eq!(code(&["actions", "--config", &path]), 2);
    fs::write(&cfg, "not json").unwrap();
    assert_eq!(code(&["actions", "--config", &path]), 2);
}

#[test]
fn help_lists_the_flags() {
    let top = ok(&["--help"]);
    for sub in ["geometry", "simulate", "actions", "sweep", "quantize"] {
        assert!(top.contains(sub));
    }
    let help = ok(&["sweep", "--help"]);
    for flag in ["--e-min", "--l-count", "--s-max", "--summary", "--config", "--potential", "Example:"] {
        assert!(help.contains(flag), "missing {flag}");
    }
}

#[test]
fn documented_examples_run_quickly() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).display().to_string();
    let examples: Vec<Vec<String>> = vec![
        "geometry --r 1 --u-min -2 --u-max 2 --nu 41 --nv 24 --out".split(' ').map(String::from).chain([p("mesh.csv")]).collect(),
        "simulate --potential harmonic --kappa 1 --energy 1.6 --l 0.7 --s 0.4 --t-end 50 --out"
            .split(' ')
            .map(String::from)
            .chain([p("traj.csv")])
            .collect(),
        "actions --energy 1 --l 1 --s 0".split(' ').map(String::from).collect(),
        "sweep --e-min 1 --e-max 5.5 --e-count 10 --l 0.8 --s 0.3 --out".split(' ').map(String::from).chain([p("sweep.csv")]).collect(),
        "quantize --n 3".split(' ').map(String::from).collect(),
    ];
    for ex in examples {
        let args: Vec<&str> = ex.iter().map(String::as_str).collect();
        let t = Instant::now();
        ok(&args);
        assert!(t.elapsed() < Duration::from_secs(10), "{args:?} took {:?}", t.elapsed());
    }
}
