//! Browser bindings: generate an instance, solve it, and check the result
//! against exhaustive search. Every entry point takes and returns JSON text.

use serde_json::json;
use wasm_bindgen::prelude::*;

use treecross::generator::gen_raw_instance;
use treecross::io::{emit_drawing, emit_instance, parse_instance, prepare, solve, Algorithm, Format, Instance, SolveOptions};
use treecross::GenParams;

/// Demo-sized caps so a click never freezes the tab.
const MAX_GRID_CELLS: u128 = 2_000_000;
const MAX_ORACLE_DRAWINGS: u128 = 200_000;

pub fn generate_inner(seed: u64, trees: usize, layers: usize, vertices: usize, interleave_bias: f64) -> Result<String, String> {
    let params = GenParams {
        trees,
        layers,
        vertices,
        interleave_bias,
    };
    let raw = gen_raw_instance(seed, &params).map_err(|e| e.to_string())?;
    Ok(emit_instance(&Instance::new(raw)))
}

fn root_order(csv: &str) -> Option<Vec<String>> {
    let names: Vec<String> = csv.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect();
    (!names.is_empty()).then_some(names)
}

/// Returns `{algorithm, crossings, svg, drawing}`; `root_order` is a
/// comma-separated layer-3 order or empty.
pub fn solve_inner(instance: &str, algorithm: &str, root_order_csv: &str) -> Result<String, String> {
    let algorithm: Algorithm = algorithm.parse()?;
    let instance = parse_instance(instance).map_err(|e| e.to_string())?;
    let p = prepare(&instance, root_order(root_order_csv).as_deref()).map_err(|e| e.to_string())?;
    let options = SolveOptions {
        algorithm,
        max_grid_cells: MAX_GRID_CELLS,
        max_oracle_drawings: MAX_ORACLE_DRAWINGS,
    };
    let (used, sol) = solve(&p, &options).map_err(|e| e.to_string())?;
    let drawing = emit_drawing(&p.forest, &sol.drawing, sol.crossings, used.name(), Format::Json);
    let drawing: serde_json::Value = serde_json::from_str(&drawing).map_err(|e| e.to_string())?;
    Ok(json!({
        "algorithm": used.name(),
        "crossings": sol.crossings,
        "svg": emit_drawing(&p.forest, &sol.drawing, sol.crossings, used.name(), Format::Svg),
        "drawing": drawing,
    })
    .to_string())
}

/// Solves with the automatic choice and with exhaustive search and reports
/// `{algorithm, crossings, oracle, agree}`.
pub fn verify_inner(instance: &str, root_order_csv: &str) -> Result<String, String> {
    let instance = parse_instance(instance).map_err(|e| e.to_string())?;
    let p = prepare(&instance, root_order(root_order_csv).as_deref()).map_err(|e| e.to_string())?;
    let mut options = SolveOptions {
        algorithm: Algorithm::Auto,
        max_grid_cells: MAX_GRID_CELLS,
        max_oracle_drawings: MAX_ORACLE_DRAWINGS,
    };
    let (used, fast) = solve(&p, &options).map_err(|e| e.to_string())?;
    options.algorithm = Algorithm::Oracle;
    let (_, slow) = solve(&p, &options).map_err(|e| e.to_string())?;
    Ok(json!({
        "algorithm": used.name(),
        "crossings": fast.crossings,
        "oracle": slow.crossings,
        "agree": fast.crossings == slow.crossings,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn generate(seed: u32, trees: usize, layers: usize, vertices: usize, interleave_bias: f64) -> Result<String, JsValue> {
    generate_inner(seed.into(), trees, layers, vertices, interleave_bias).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn solve_instance(instance: &str, algorithm: &str, root_order: &str) -> Result<String, JsValue> {
    solve_inner(instance, algorithm, root_order).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn verify_instance(instance: &str, root_order: &str) -> Result<String, JsValue> {
    verify_inner(instance, root_order).map_err(|e| JsValue::from_str(&e))
}
