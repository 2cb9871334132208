use nevpick_wasm_demo::{degree_scan_json, preset_json, reduce_json, solve_json};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn solve_preset_reproduces_the_reference_solution() {
    let out = parse(&solve_json(&preset_json("system-identification").unwrap()).unwrap());
    assert!(out["max_residual"].as_f64().unwrap() < 1e-10);
    let traj = out["trajectory"].as_array().unwrap();
    assert!(traj.len() <= 401);
    assert_eq!(traj[0]["nu"], 0.0);
    assert_eq!(traj.last().unwrap()["nu"], 1.0);
    assert_eq!(traj[0]["poles"].as_array().unwrap().len(), 7);
    assert_eq!(out["spectrum"]["phi"].as_array().unwrap().len(), 512);
}

#[test]
fn degree_scan_finds_degree_two() {
    for name in ["degree-two", "modified-zeros"] {
        let rows = parse(&degree_scan_json(&preset_json(name).unwrap()).unwrap());
        for row in rows.as_array().unwrap() {
            assert_eq!(row["estimated_degree"], 2, "{name}: {row}");
        }
    }
}

#[test]
fn reduce_preset_stays_close() {
    let out = parse(&reduce_json(&preset_json("degree-six").unwrap()).unwrap());
    assert!(out["deviation"].as_f64().unwrap() < 0.5);
    assert_eq!(out["kept_zeros"].as_array().unwrap().len(), 4);
}

#[test]
fn errors_are_messages() {
    assert!(solve_json("{").unwrap_err().contains("problem JSON"));
    assert!(preset_json("nope").is_err());
    let bad = r#"{"problem":{"nodes":["inf"],"values":[{"re":0.5}],"sigma_coeffs":[1]},"target_degree":3}"#;
    assert!(reduce_json(bad).is_err());
}
