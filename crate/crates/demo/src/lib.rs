//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes points as a JSON array of `[x, y]` pairs and returns a
//! JSON document. The `*_json` functions hold the logic and run natively.

use isotree::affinity::KernelForm;
use isotree::pipeline::{build_tree, cluster, profile, PipelineConfig, Potentials, ProfileConfig};
use isotree::quantity::{format_rational, parse_rational, rational_to_f64};
use isotree::solver::{decide_iso, search_bounds, Decision};
use isotree::{DataSet, ProfileDocument, Rational};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn parse_points(points: &str) -> Result<DataSet, String> {
    let raw: Vec<Vec<f64>> = serde_json::from_str(points).map_err(|e| format!("points: {e}"))?;
    DataSet::new(raw).map_err(|e| e.to_string())
}

fn kernel(name: &str) -> Result<KernelForm, String> {
    match name {
        "half-square-width" => Ok(KernelForm::HalfSquareWidth),
        "exponential" => Ok(KernelForm::Exponential),
        "gaussian" => Ok(KernelForm::Gaussian),
        other => Err(format!("unknown exponent {other:?}")),
    }
}

fn rational(name: &str, text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| format!("{name}: {e}"))
}

fn config(k: usize, sigma: f64, exponent: &str, alpha: &str) -> Result<PipelineConfig, String> {
    let mut c = PipelineConfig::new(k, sigma);
    c.kernel = kernel(exponent)?;
    c.alpha = rational("alpha", alpha)?;
    c.potentials = Potentials::MeanDistance;
    Ok(c)
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct ClusterView {
    labels: Vec<i64>,
    /// Spanning tree edges as `[u, v]`.
    tree: Vec<[usize; 2]>,
    summary: isotree::ClusterSummary,
}

pub fn cluster_json(points: &str, k: usize, sigma: f64, exponent: &str, alpha: &str, complete: bool) -> Result<String, String> {
    let data = parse_points(points)?;
    let mut c = config(k, sigma, exponent, alpha)?;
    c.complete_labels = complete;
    let out = cluster(&data, &c).map_err(|e| e.to_string())?;
    to_json(&ClusterView {
        labels: out.labels.clone(),
        tree: out.tree.edge_list().iter().map(|&(u, v, _)| [u, v]).collect(),
        summary: out.summary(),
    })
}

pub fn profile_json(
    points: &str,
    k: usize,
    sigma: f64,
    exponent: &str,
    sigma_s: f64,
    epsilon: &str,
    alpha_max: &str,
) -> Result<String, String> {
    if !(sigma_s > 0.0) {
        return Err("sigma_s must be positive".into());
    }
    let data = parse_points(points)?;
    let c = config(k, sigma, exponent, "0")?;
    let epsilon = rational("epsilon", epsilon)?;
    if epsilon <= Rational::default() {
        return Err("epsilon must be positive".into());
    }
    let alpha_max = match alpha_max.trim() {
        "" | "auto" => None,
        t => Some(rational("alpha_max", t)?).filter(|a| *a > Rational::default()),
    };
    let pc = ProfileConfig { sigma_s, epsilon, alpha_max };
    let (_, prof) = profile(&data, &c, &pc).map_err(|e| e.to_string())?;
    to_json(&ProfileDocument::new(&prof))
}

#[derive(Serialize)]
struct DecisionView {
    feasible: bool,
    threshold: String,
    /// Labels of the certificate, −1 outside it; empty when infeasible.
    labels: Vec<i64>,
    lower: f64,
    upper: f64,
}

/// Run the linear-time decision pass at `threshold` (decimal or `a/b`).
pub fn decide_json(points: &str, k: usize, sigma: f64, exponent: &str, alpha: &str, threshold: &str) -> Result<String, String> {
    let data = parse_points(points)?;
    let c = config(k, sigma, exponent, alpha)?;
    let (_, tree) = build_tree(&data, &c).map_err(|e| e.to_string())?;
    let n = rational("threshold", threshold)?;
    let bounds = search_bounds(&tree, &c.alpha).map_err(|e| e.to_string())?;
    let decision = decide_iso(&tree, k, &n, &c.alpha).map_err(|e| e.to_string())?;
    let labels = match &decision {
        Decision::Yes(s) => s.labels().into_iter().map(|l| l.map_or(-1, |i| i as i64)).collect(),
        Decision::No => Vec::new(),
    };
    to_json(&DecisionView {
        feasible: decision.is_yes(),
        threshold: format_rational(&n),
        labels,
        lower: rational_to_f64(&bounds.lower),
        upper: rational_to_f64(&bounds.upper),
    })
}

#[wasm_bindgen]
pub fn cluster_points(points: &str, k: usize, sigma: f64, exponent: &str, alpha: &str, complete: bool) -> Result<String, JsValue> {
    cluster_json(points, k, sigma, exponent, alpha, complete).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn outlier_profile(
    points: &str,
    k: usize,
    sigma: f64,
    exponent: &str,
    sigma_s: f64,
    epsilon: &str,
    alpha_max: &str,
) -> Result<String, JsValue> {
    profile_json(points, k, sigma, exponent, sigma_s, epsilon, alpha_max).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn decide(points: &str, k: usize, sigma: f64, exponent: &str, alpha: &str, threshold: &str) -> Result<String, JsValue> {
    decide_json(points, k, sigma, exponent, alpha, threshold).map_err(|e| JsValue::from_str(&e))
}
