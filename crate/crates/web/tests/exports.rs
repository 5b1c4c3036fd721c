use brillouin_tap_web::{estimation_floors, exponent_curves, segment_parameters};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn exponent_curves_are_ordered() {
    let r = parse(exponent_curves(5.0, 1.0, 0.5, false, 0.5, 11));
    let (d, dp, dh) = (floats(&r["D"]), floats(&r["DP"]), floats(&r["DH"]));
    assert_eq!(d.len(), 11);
    assert_eq!(d[0], 0.0);
    for i in 0..11 {
        assert!(dp[i] <= d[i] + 1e-12 && dh[i] <= d[i] + 1e-12);
    }
}

#[test]
fn floors_never_beat_the_quantum_bound() {
    let r = parse(estimation_floors(0.5, 1.0, 2.0, 1000.0, 0.05, 0.8, 8));
    let q = floats(&r["quantum"]);
    for name in ["heterodyne", "homodyne", "photon_counting", "sld_at_truth"] {
        for (c, q) in floats(&r[name]).iter().zip(&q) {
            assert!(*c >= q * (1.0 - 1e-6), "{name}");
        }
    }
}

#[test]
fn segment_defaults() {
    let r = parse(segment_parameters(0.1, 0.0, 1.0, 0.0, 0.98, 1.0));
    assert!((r["kappa"][0].as_f64().unwrap() - 0.02).abs() < 1e-15);
    assert!((r["nu_abs2"].as_f64().unwrap() - 0.04).abs() < 1e-15);
}

#[test]
fn bad_input_reports_error() {
    assert!(parse(exponent_curves(-1.0, 1.0, 0.5, false, 0.5, 11))["error"].is_string());
    assert!(parse(estimation_floors(0.5, 1.0, 2.0, 1000.0, 0.5, 0.2, 8))["error"].is_string());
    assert!(parse(segment_parameters(0.1, 0.0, 0.0, 0.0, 0.98, 1.0))["error"].is_string());
}
