use rotdirac_web::{density_json, roots_json, transform_json};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn roots_free_limit() {
    let v = parse(&roots_json(0.0, 0.0, 0.0).unwrap());
    let r: Vec<f64> = v["roots"].as_array().unwrap().iter().map(|x| x["value"].as_f64().unwrap()).collect();
    assert_eq!(r, vec![-1.0, 1.0]);
    assert!(roots_json(f64::NAN, 0.0, 0.0).is_err());
}

#[test]
fn transform_round_trip() {
    let f = parse(&transform_json(0.3, 1, -1, 1, -1, 0.4, 1.0, 2.0, -1.5, false).unwrap());
    let e = &f["event"];
    let g = |k: &str| e[k].as_f64().unwrap();
    let b = parse(&transform_json(0.3, 1, -1, 1, -1, g("phi"), g("r"), g("z"), g("t"), true).unwrap());
    for (k, x) in [("phi", 0.4), ("z", 2.0), ("t", -1.5)] {
        assert!((b["event"][k].as_f64().unwrap() - x).abs() < 1e-12);
    }
    assert!(transform_json(0.3, 2, -1, 1, -1, 0.0, 0.0, 0.0, 0.0, false).is_err());
}

#[test]
fn density_integrates_to_one() {
    let v = parse(&density_json("massless", 1, 1, 0.5, -1.0, 0.0, 1.0, 0.3, 0.7, 201).unwrap());
    let n = v["n"].as_u64().unwrap() as usize;
    let half = v["half_width"].as_f64().unwrap();
    let h = 2.0 * half / (n - 1) as f64;
    let sum: f64 = v["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).sum();
    assert!((sum * h * h - 1.0).abs() < 1e-3);
    assert!(density_json("massless", 1, 1, 0.5, -1.0, 0.0, 1.0, 0.0, 0.0, 1).is_err());
    assert!(density_json("nonsense", 1, 1, 0.5, -1.0, 0.0, 1.0, 0.0, 0.0, 10).is_err());
}
