//! Browser bindings: enumerate a polytope, draw a three-site hull, compare
//! how much of the rearrangement bound different graphs recover.
//!
//! The plain functions return `Result<String, String>` and are what the
//! native tests exercise; the `#[wasm_bindgen]` wrappers only convert errors.

use diffpoly::optimize::{optimize_over, vertex_set, Method, Objective};
use diffpoly::presets::parse_population;
use diffpoly::rational::to_decimal_string;
use diffpoly::{plot, DiffusionGraph, PopulationVector};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Browser work is single-threaded; keep requests small.
pub const MAX_SITES: usize = 5;

fn inputs(graph: &str, rho: &str) -> Result<(DiffusionGraph, PopulationVector), String> {
    let graph = DiffusionGraph::from_builder_spec(graph).map_err(|e| e.to_string())?;
    if graph.n() > MAX_SITES {
        return Err(format!("at most {MAX_SITES} sites in the browser"));
    }
    let rho = parse_population(rho).map_err(|e| e.to_string())?;
    if rho.dim() != graph.n() {
        return Err(format!("{} components for {} vertices", rho.dim(), graph.n()));
    }
    Ok((graph, rho))
}

/// Vertex list with sequences and kinds, as JSON.
pub fn polytope(graph: &str, rho: &str) -> Result<String, String> {
    let (graph, rho) = inputs(graph, rho)?;
    let result = vertex_set(&graph, &rho, Method::Enumerate).map_err(|e| e.to_string())?;
    serde_json::to_string(&result).map_err(|e| e.to_string())
}

/// SVG of the hull projected onto the first two coordinates; three sites only.
pub fn hull(graph: &str, rho: &str) -> Result<String, String> {
    let (graph, rho) = inputs(graph, rho)?;
    let result = vertex_set(&graph, &rho, Method::Enumerate).map_err(|e| e.to_string())?;
    plot::hull_svg(&result).map_err(|e| e.to_string())
}

/// Recovered percentage on the complete graph, the cycle and the path.
pub fn compare(rho: &str, weights: &str) -> Result<String, String> {
    let rho = parse_population(rho).map_err(|e| e.to_string())?;
    let n = rho.dim();
    if !(3..=MAX_SITES.min(4)).contains(&n) {
        return Err("comparison needs 3 or 4 sites".into());
    }
    let w = Objective::parse(weights).map_err(|e| e.to_string())?;
    if w.dim() != n {
        return Err(format!("{} weights for {n} sites", w.dim()));
    }
    let mut rows = Vec::new();
    for (name, method) in [
        ("complete", Method::Structured),
        ("cycle", Method::Enumerate),
        ("path", Method::Structured),
    ] {
        let graph = DiffusionGraph::from_builder_spec(&format!("{name}:{n}")).map_err(|e| e.to_string())?;
        let report = optimize_over(&graph, &rho, &w, method).map_err(|e| e.to_string())?;
        let best = report.optimal_vertex();
        rows.push(json!({
            "graph": name,
            "percent": report.recovered_percent,
            "energy": to_decimal_string(&report.optimal_energy, 6),
            "gardner": to_decimal_string(&report.gardner_energy, 6),
            "point": best.point,
            "sequence": best.sequence.to_string(),
        }));
    }
    Ok(serde_json::Value::Array(rows).to_string())
}

#[wasm_bindgen(js_name = polytope)]
pub fn polytope_js(graph: &str, rho: &str) -> Result<String, JsError> {
    polytope(graph, rho).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = hull)]
pub fn hull_js(graph: &str, rho: &str) -> Result<String, JsError> {
    hull(graph, rho).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = compare)]
pub fn compare_js(rho: &str, weights: &str) -> Result<String, JsError> {
    compare(rho, weights).map_err(|e| JsError::new(&e))
}
