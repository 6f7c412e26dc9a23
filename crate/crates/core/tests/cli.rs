use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_rotdirac"));
    c.env_remove("ROTDIRAC_CONFIG_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o).lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

const EVENTS: &str = r#"[{"phi": 0.3, "r": 1.0, "z": 0.1, "t": 2.5},
                         {"phi": -1.25, "r": 0.5, "z": -3.0, "t": 3.0},
                         {"phi": 4.0, "r": 2.0, "z": 7.5, "t": 7.5}]"#;

#[test]
fn galilean_transform_preserves_z_and_t_text() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", &format!(r#"{{"field": {{"axial": -1.0}}, "events": {EVENTS}}}"#));
    let o = run(&["transform", "--config", &cfg, "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    for row in csv_rows(&o) {
        // z, t in columns 3, 4; z_out, t_out in 7, 8
        assert_eq!(row[3], row[7]);
        assert_eq!(row[4], row[8]);
    }
}

#[test]
fn light_cone_event_has_small_deviation_and_inverse_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        &format!(r#"{{"field": {{"axial": -1.0}}, "frame": {{"tau": 0.01}}, "events": {EVENTS}}}"#),
    );
    let o = run(&["transform", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    let rows = v["result"]["events"].as_array().unwrap();
    // third event lies on z = t
    assert!(rows[2]["light_dev"].as_f64().unwrap() <= 1e-10);
    assert!(rows[0]["light_dev"].is_null());

    let out: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| serde_json::json!({"phi": r["phi_out"], "r": r["r_out"], "z": r["z_out"], "t": r["t_out"]}))
        .collect();
    let cfg2 = write(
        dir.path(),
        "c2.json",
        &format!(
            r#"{{"field": {{"axial": -1.0}}, "frame": {{"tau": 0.01}}, "events": {}}}"#,
            serde_json::Value::Array(out)
        ),
    );
    let back = json(&run(&["transform", "--inverse", "--config", &cfg2]));
    for (a, b) in rows.iter().zip(back["result"]["events"].as_array().unwrap()) {
        for (k, kb) in [("phi", "phi_out"), ("z", "z_out"), ("t", "t_out")] {
            let x = a[k].as_f64().unwrap();
            let y = b[kb].as_f64().unwrap();
            assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()), "{k}: {x} vs {y}");
        }
    }
}

#[test]
fn malformed_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"field": {"axial": -1.0, "polarization": 2}}"#);
    assert_eq!(run(&["roots", "--config", &cfg]).status.code(), Some(2));
    let cfg = write(dir.path(), "d.json", "{not json");
    assert_eq!(run(&["transform", "--config", &cfg]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--config", "/nonexistent/x.json"]).status.code(), Some(2));
}

#[test]
fn roots_free_limit_and_pole() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"field": {"axial": -1.0}, "cubic": {"h": 0, "e0": 0, "lambda": 0}}"#);
    let o = run(&["roots", "--config", &cfg, "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let vals: Vec<f64> = csv_rows(&o).iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(vals, vec![-1.0, 1.0]);

    // h tiny: one root hugs the pole
    let cfg =
        write(dir.path(), "p.json", r#"{"field": {"axial": -1.0}, "cubic": {"h": 1e-6, "e0": 1.0, "lambda": 0}}"#);
    assert_eq!(run(&["roots", "--config", &cfg, "--tolerance", "1e-6"]).status.code(), Some(3));
}

#[test]
fn verify_exit_codes_and_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run(&["verify", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["residual"]["pass"], true);

    let o = run(&["verify", "--perturb-energy", "0.01", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v["result"]["residual"]["report"]["max_rel_residual"].as_f64().unwrap() > 1e-3);

    let v = json(&run(&["verify", "--strict-prefactor", "--points", "100"]));
    assert_eq!(v["result"]["residual"]["pass"], true);
    assert_eq!(v["result"]["normalization"]["pass"], false);
}

#[test]
fn verify_is_byte_deterministic() {
    let a = run(&["verify", "--seed", "7", "--points", "300"]);
    let b = run(&["verify", "--seed", "7", "--points", "300"]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["verify", "--seed", "8", "--points", "300"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn config_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "default.json",
        r#"{"field": {"axial": -2.0, "wave": 0.0}, "events": [{"phi": 0, "r": 1, "z": 0, "t": 0}]}"#,
    );
    let o = bin().env("ROTDIRAC_CONFIG_DIR", dir.path()).args(["transform"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["config"]["field"]["axial"], -2.0);
    write(dir.path(), "named.json", r#"{"field": {"axial": -3.0}, "events": [{"phi": 0, "r": 1, "z": 0, "t": 0}]}"#);
    let o =
        bin().env("ROTDIRAC_CONFIG_DIR", dir.path()).args(["transform", "--config", "named.json"]).output().unwrap();
    assert_eq!(json(&o)["config"]["field"]["axial"], -3.0);
}

#[test]
fn expect_zero_wave_has_no_transverse_momentum() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"field": {"axial": -1.5, "wave": 0.0}}"#);
    let v = json(&run(&["expect", "--config", &cfg, "--z", "0.4", "--t", "-1.1"]));
    let rows = v["result"]["rows"].as_array().unwrap();
    for r in &rows[1..3] {
        assert!(r["quadrature"].as_f64().unwrap().abs() <= 1e-12);
        assert_eq!(r["closed_form"].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn scans_keep_row_order_and_report_errors_per_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"field": {"axial": -1.0}, "frame": {"tau": 0.001}}"#);
    let o = run(&[
        "scan", "--config", &cfg, "--axis", "tau", "--from", "1e-8", "--to", "1e-4", "--steps", "9", "--log",
        "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let speeds: Vec<f64> = csv_rows(&o).iter().map(|r| r[3].parse().unwrap()).collect();
    assert_eq!(speeds.len(), 9);
    assert!(speeds.windows(2).all(|w| w[1] > w[0]));

    let o = run(&["scan", "--config", &cfg, "--axis", "n", "--from", "-2", "--to", "2", "--format", "csv"]);
    let gaps: Vec<f64> = csv_rows(&o).iter().map(|r| r[3].parse().unwrap()).collect();
    assert_eq!(gaps.len(), 5);
    assert_eq!(gaps[2], 0.0);
    for (i, g) in gaps.iter().enumerate() {
        let n = i as f64 - 2.0;
        assert!((g - n * gaps[3]).abs() <= 1e-9 * gaps[3].abs());
    }

    let g = write(dir.path(), "g.json", r#"{"field": {"axial": -1.0}}"#);
    let o = run(&["scan", "--config", &g, "--axis", "n", "--from", "-1", "--to", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o);
    assert!(!rows[0].last().unwrap().is_empty());
    assert!(rows[1].last().unwrap().is_empty());
}

#[test]
fn audit_finds_massless_convention() {
    let v = json(&run(&["audit", "--points", "50"]));
    assert_eq!(v["result"]["found"], true);
    assert_eq!(v["result"]["entries"].as_array().unwrap().len(), 64);
}
