//! Browser bindings for the interactive demo page in `www/`.
//!
//! Three operations are exposed: run the filter protocol at one setting,
//! sweep f over a (theta1, 1/gamma^2) grid for the heatmap, and classify a
//! spectra point against the polytope catalog. Results cross the boundary as
//! JSON strings (or a flat f64 array for the heatmap); `www/app.js` does the
//! rendering.

use wasm_bindgen::prelude::*;

use entpoly::filter::{self, FilterSetting};
use entpoly::polytope::{self, PolytopeId};
use entpoly::qcore::{CanonicalState, SpectraPoint, StateVector};

fn state_by_name(name: &str) -> Result<StateVector, String> {
    let which = match name {
        "psi1" => CanonicalState::Psi1,
        "psi2" => CanonicalState::Psi2,
        "w4" => CanonicalState::WN(4),
        "ghz4" => CanonicalState::GhzN(4),
        other => return Err(format!("unknown state {other:?}")),
    };
    StateVector::canonical(which).map_err(|e| e.to_string())
}

pub fn protocol_json(state: &str, theta1: f64, gamma: f64) -> Result<String, String> {
    let sv = state_by_name(state)?;
    let r =
        filter::run_protocol(&sv, &FilterSetting::new(theta1, gamma)).map_err(|e| e.to_string())?;
    let s = r.spectra.values();
    Ok(serde_json::json!({
        "lambda": [s[0], s[1], s[2]],
        "full_spectra": r.full_spectra.values(),
        "f": r.f,
        "success": r.success,
        "inside_p4": r.f >= 1.0 - 1e-9,
    })
    .to_string())
}

/// Row-major f values (theta1 outer, 1/gamma^2 inner); NaN marks annihilated
/// cells. Grid spans [0, theta_max] x [1, ig_max] inclusive.
pub fn sweep_grid(
    state: &str,
    theta_count: usize,
    ig_count: usize,
    theta_max: f64,
    ig_max: f64,
) -> Result<Vec<f64>, String> {
    if theta_count < 2 || ig_count < 2 {
        return Err("grid needs at least 2 points per axis".into());
    }
    let sv = state_by_name(state)?;
    let thetas: Vec<f64> = (0..theta_count)
        .map(|i| theta_max * i as f64 / (theta_count - 1) as f64)
        .collect();
    let igs: Vec<f64> = (0..ig_count)
        .map(|j| 1.0 + (ig_max - 1.0) * j as f64 / (ig_count - 1) as f64)
        .collect();
    let rows = filter::sweep(&sv, &thetas, &igs).map_err(|e| e.to_string())?;
    Ok(rows
        .iter()
        .map(|row| row.result.as_ref().map_or(f64::NAN, |r| r.f))
        .collect())
}

pub fn classify_json(values: &[f64]) -> Result<String, String> {
    let point = SpectraPoint::new(values.to_vec()).map_err(|e| e.to_string())?;
    let c = polytope::classify(&point).map_err(|e| e.to_string())?;
    let mut doc = serde_json::json!({
        "containing": c.containing.iter().map(|id| id.to_string()).collect::<Vec<_>>(),
        "minimal": c.minimal.iter().map(|id| id.to_string()).collect::<Vec<_>>(),
    });
    if values.len() == 4 {
        let fs: Vec<f64> = (1..=4)
            .map(|i| polytope::f_value(&point, i).expect("4 entries"))
            .collect();
        doc["f_values"] = serde_json::json!(fs);
        let p4 = polytope::by_id(&"P4".parse::<PolytopeId>().expect("valid id"));
        doc["inside_p4"] = serde_json::json!(p4
            .contains_lp(&point, polytope::DEFAULT_TOL)
            .map_err(|e| e.to_string())?);
    }
    Ok(doc.to_string())
}

#[wasm_bindgen]
pub fn protocol(state: &str, theta1: f64, gamma: f64) -> Result<String, JsValue> {
    protocol_json(state, theta1, gamma).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sweep(
    state: &str,
    theta_count: usize,
    ig_count: usize,
    theta_max: f64,
    ig_max: f64,
) -> Result<Vec<f64>, JsValue> {
    sweep_grid(state, theta_count, ig_count, theta_max, ig_max).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn classify(values: &[f64]) -> Result<String, JsValue> {
    classify_json(values).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn protocol_json_ghz_escape_point() {
        let text = protocol_json("psi2", 0.0, 1.0).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!((doc["f"].as_f64().unwrap() - 0.5).abs() < 1e-9);
        assert_eq!(doc["inside_p4"], false);
        assert!((doc["success"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sweep_grid_shape_and_values() {
        let grid = sweep_grid("psi1", 5, 4, std::f64::consts::FRAC_PI_2, 8.0).unwrap();
        assert_eq!(grid.len(), 20);
        assert!(grid.iter().all(|f| f.is_finite()));
        // every Psi1 image stays at or above the f = 1 facet
        assert!(grid.iter().all(|&f| f >= 1.0 - 1e-9));
        let grid2 = sweep_grid("psi2", 5, 4, std::f64::consts::FRAC_PI_2, 8.0).unwrap();
        assert!(grid2.iter().any(|&f| f < 1.0));
        assert!(sweep_grid("psi1", 1, 4, 1.0, 8.0).is_err());
        assert!(sweep_grid("nope", 5, 4, 1.0, 8.0).is_err());
    }

    #[test]
    fn classify_json_bottom_vertex() {
        let text = classify_json(&[0.5, 0.5, 0.5, 0.5]).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["minimal"][0], "P4");
        assert_eq!(doc["inside_p4"], true);
        assert_eq!(doc["containing"].as_array().unwrap().len(), 8);
        assert!(classify_json(&[0.2, 0.5, 0.5, 0.5]).is_err());
    }
}
