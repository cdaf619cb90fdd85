//! Browser bindings: geometry goes in as JSON text, results come out as JSON
//! or SVG text.

use serde_json::json;
use wasm_bindgen::prelude::*;

use gaugekit::gauge::circumradius;
use gaugekit::geometry::json::polytope_from_json;
use gaugekit::radii::{full_profile, SearchConfig};
use gaugekit::render::{scene, to_svg, Figure};
use gaugekit::{GaugeBody, Polytope};

fn load(set: &str, gauge: &str) -> Result<(Polytope, GaugeBody), String> {
    let k = polytope_from_json(set).map_err(|e| format!("K: {e}"))?;
    let c = polytope_from_json(gauge)
        .and_then(GaugeBody::new)
        .map_err(|e| format!("C: {e}"))?;
    Ok((k, c))
}

fn finite_or_inf(v: f64) -> serde_json::Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!("inf")
    }
}

pub fn circumradius_text(set: &str, gauge: &str) -> Result<String, String> {
    let (k, c) = load(set, gauge)?;
    let r = circumradius(&k, &c).map_err(|e| e.to_string())?;
    let center: Option<Vec<f64>> = r.witness_center.map(|x| x.iter().copied().collect());
    Ok(json!({ "value": r.value, "center": center }).to_string())
}

pub fn render_text(set: &str, gauge: &str, lambda: f64, what: &str) -> Result<String, String> {
    let (k, c) = load(set, gauge)?;
    let fig: Figure = what.parse().map_err(|e: gaugekit::GeomError| e.to_string())?;
    scene(&k, &c, lambda, fig).map(|s| to_svg(&s)).map_err(|e| e.to_string())
}

pub fn profile_text(set: &str, gauge: &str) -> Result<String, String> {
    let (k, c) = load(set, gauge)?;
    let p = full_profile(&k, &c, &SearchConfig::default()).map_err(|e| e.to_string())?;
    let rows: Vec<_> = p
        .entries
        .iter()
        .map(|e| match &e.result {
            Ok(r) => json!({ "quantity": e.quantity.to_string(), "symbol": e.quantity.symbol(), "value": finite_or_inf(r.value) }),
            Err(err) => json!({ "quantity": e.quantity.to_string(), "symbol": e.quantity.symbol(), "error": err.to_string() }),
        })
        .collect();
    let chains: Vec<_> = p.chains.iter().map(|c| json!({ "name": c.name, "ok": c.passed() })).collect();
    Ok(json!({ "dim": p.dim, "entries": rows, "chains": chains }).to_string())
}

/// `{"value": R, "center": [...]}`.
#[wasm_bindgen]
pub fn circumradius_json(set: &str, gauge: &str) -> Result<String, JsValue> {
    circumradius_text(set, gauge).map_err(|e| JsValue::from_str(&e))
}

/// SVG of `bh`, `bi` or `cc` for planar input.
#[wasm_bindgen]
pub fn render_svg(set: &str, gauge: &str, lambda: f64, what: &str) -> Result<String, JsValue> {
    render_text(set, gauge, lambda, what).map_err(|e| JsValue::from_str(&e))
}

/// All successive radii as JSON rows.
#[wasm_bindgen]
pub fn profile_json(set: &str, gauge: &str) -> Result<String, JsValue> {
    profile_text(set, gauge).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = r#"{"vrep": [[0, 0], [1, 0], [1, 1], [0, 1]]}"#;
    const BOX: &str = r#"{"vrep": [[-1, -1], [1, -1], [1, 1], [-1, 1]]}"#;

    #[test]
    fn circumradius_of_square() {
        let v: serde_json::Value = serde_json::from_str(&circumradius_text(SQUARE, BOX).unwrap()).unwrap();
        assert!((v["value"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn render_and_profile() {
        assert!(render_text(SQUARE, BOX, 1.0, "bh").unwrap().contains("<svg"));
        let v: serde_json::Value = serde_json::from_str(&profile_text(SQUARE, BOX).unwrap()).unwrap();
        assert_eq!(v["entries"].as_array().unwrap().len(), 16);
    }

    #[test]
    fn bad_gauge_is_reported() {
        let off = r#"{"vrep": [[1, 1], [2, 1], [2, 2]]}"#;
        assert!(circumradius_text(SQUARE, off).unwrap_err().starts_with("C:"));
    }
}
