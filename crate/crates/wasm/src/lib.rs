//! Browser bindings. Every export takes plain numbers and returns a JSON
//! string; failures surface as a thrown string on the JS side.
//!
//! The `*_json` functions hold the logic and run natively in tests.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use midcost::equilibria::SolverConfig;
use midcost::pivot::{thresholds, ElectorateParams};
use midcost::regime::{
    classify, coin_toss_interval, geometric_grid, sweep_bounds, SweepSpec, ThresholdKind,
};

#[derive(Serialize)]
struct Curves {
    n: Vec<f64>,
    /// One entry per threshold in `ThresholdKind::ALL` order, natural log.
    ln: Vec<Curve>,
    ct_admissible: Vec<bool>,
}

#[derive(Serialize)]
struct Curve {
    name: &'static str,
    values: Vec<f64>,
}

#[derive(Serialize)]
struct Point {
    thresholds: midcost::ThresholdSet,
    coin_toss_interval: Option<(f64, f64)>,
    report: midcost::RegimeReport,
}

/// ln-threshold curves over `points` geometric steps of `N`.
pub fn threshold_curves_json(
    p: f64,
    p_a: f64,
    n_min: f64,
    n_max: f64,
    points: usize,
) -> Result<String, String> {
    let spec = SweepSpec {
        p,
        p_a,
        n_grid: geometric_grid(n_min, n_max, points).map_err(|e| e.to_string())?,
        quantities: ThresholdKind::ALL.to_vec(),
    };
    let tab = sweep_bounds(&spec).map_err(|e| e.to_string())?;
    let ln = tab
        .quantities
        .iter()
        .zip(tab.ln_values)
        .map(|(q, values)| Curve {
            name: q.name(),
            values,
        })
        .collect();
    let curves = Curves {
        n: tab.n,
        ln,
        ct_admissible: tab.ct_admissible,
    };
    serde_json::to_string(&curves).map_err(|e| e.to_string())
}

/// Thresholds, the interval to avoid, the regime of `c` and every equilibrium.
pub fn analyze_json(n: f64, p: f64, p_a: f64, c: f64) -> Result<String, String> {
    let pr = ElectorateParams::new(n, p, p_a).map_err(|e| e.to_string())?;
    let point = Point {
        thresholds: thresholds(&pr).map_err(|e| e.to_string())?,
        coin_toss_interval: coin_toss_interval(&pr).map_err(|e| e.to_string())?,
        report: classify(&pr, c, &SolverConfig::default()).map_err(|e| e.to_string())?,
    };
    serde_json::to_string(&point).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = thresholdCurves)]
pub fn threshold_curves(
    p: f64,
    p_a: f64,
    n_min: f64,
    n_max: f64,
    points: usize,
) -> Result<String, JsValue> {
    threshold_curves_json(p, p_a, n_min, n_max, points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn analyze(n: f64, p: f64, p_a: f64, c: f64) -> Result<String, JsValue> {
    analyze_json(n, p, p_a, c).map_err(|e| JsValue::from_str(&e))
}
