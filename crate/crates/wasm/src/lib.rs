//! Browser bindings for the interactive demo: distance reports, geodesic
//! snapshots along the interpolation parameter, and the non-isometric
//! family explorer. Bodies travel as JSON strings in the same schema the
//! CLI uses.
//!
//! The `*_impl` functions hold the logic and are testable on any target;
//! the `#[wasm_bindgen]` wrappers only translate errors to `JsValue`.

use wasm_bindgen::prelude::*;

use bmgeo::distance::{bm_distance, canonical_position_fixed, OptimizerConfig};
use bmgeo::families::bq_family;
use bmgeo::geodesics::{b_lambda, c_lambda};
use bmgeo::io::body_from_json;
use bmgeo::svg::render_with_context;

pub fn distance_report_impl(
    body_a: &str,
    body_b: &str,
    optimize: bool,
    seed: u64,
    starts: usize,
) -> Result<String, String> {
    let a = body_from_json(body_a).map_err(|e| e.to_string())?;
    let b = body_from_json(body_b).map_err(|e| e.to_string())?;
    if optimize {
        let cfg = OptimizerConfig {
            starts: starts.max(1),
            seed,
            ..OptimizerConfig::default()
        };
        let report = bm_distance(&a, &b, &cfg).map_err(|e| e.to_string())?;
        serde_json::to_string_pretty(&report).map_err(|e| e.to_string())
    } else {
        let factor_in = a.enclosing_factor(&b).map_err(|e| e.to_string())?;
        let factor_out = b.enclosing_factor(&a).map_err(|e| e.to_string())?;
        let value = serde_json::json!({
            "estimate": factor_in * factor_out,
            "factor_in": factor_in,
            "factor_out": factor_out,
            "fixed_position": true,
        });
        serde_json::to_string_pretty(&value).map_err(|e| e.to_string())
    }
}

pub fn geodesic_svg_impl(
    body_a: &str,
    body_b: &str,
    kind: &str,
    lambda: f64,
) -> Result<String, String> {
    let a = body_from_json(body_a).map_err(|e| e.to_string())?;
    let b = body_from_json(body_b).map_err(|e| e.to_string())?;
    let pair = canonical_position_fixed(&a, &b).map_err(|e| e.to_string())?;
    let body = match kind {
        "intersection" => b_lambda(&pair, lambda).map_err(|e| e.to_string())?,
        "hull" => c_lambda(&pair, lambda).map_err(|e| e.to_string())?,
        other => return Err(format!("unknown kind \"{other}\" (intersection | hull)")),
    };
    let label = format!("{kind}  lambda = {lambda:.2}  d = {:.5}", pair.d);
    render_with_context(&body, Some(&pair), &label).map_err(|e| e.to_string())
}

pub fn family_member_svg_impl(
    body_a: &str,
    body_b: &str,
    lambda: f64,
    count: usize,
    index: usize,
) -> Result<String, String> {
    let a = body_from_json(body_a).map_err(|e| e.to_string())?;
    let b = body_from_json(body_b).map_err(|e| e.to_string())?;
    let pair = canonical_position_fixed(&a, &b).map_err(|e| e.to_string())?;
    let family = bq_family(&pair, lambda, count).map_err(|e| e.to_string())?;
    let member = family
        .members
        .get(index)
        .ok_or_else(|| "member index out of range".to_string())?;
    let label = format!(
        "member {index}  ratio = {:.6}  lambda = {lambda:.2}",
        member.ratio
    );
    render_with_context(&member.body, Some(&family.pair), &label).map_err(|e| e.to_string())
}

/// Distance between two bodies (JSON report). With `optimize = false`
/// only the fixed-position factors of the given positions are computed.
#[wasm_bindgen]
pub fn distance_report(
    body_a: &str,
    body_b: &str,
    optimize: bool,
    seed: u64,
    starts: usize,
) -> Result<String, JsValue> {
    distance_report_impl(body_a, body_b, optimize, seed, starts)
        .map_err(|e| JsValue::from_str(&e))
}

/// SVG snapshot of the interpolating body at `lambda`, with the
/// canonically positioned endpoint balls as context outlines.
#[wasm_bindgen]
pub fn geodesic_svg(
    body_a: &str,
    body_b: &str,
    kind: &str,
    lambda: f64,
) -> Result<String, JsValue> {
    geodesic_svg_impl(body_a, body_b, kind, lambda).map_err(|e| JsValue::from_str(&e))
}

/// SVG of one member of the non-isometric family at `lambda`.
#[wasm_bindgen]
pub fn family_member_svg(
    body_a: &str,
    body_b: &str,
    lambda: f64,
    count: usize,
    index: usize,
) -> Result<String, JsValue> {
    family_member_svg_impl(body_a, body_b, lambda, count, index)
        .map_err(|e| JsValue::from_str(&e))
}
