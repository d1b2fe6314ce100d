//! wasm-bindgen entry points for the static demo page in `www/`.
//! Each call returns a JSON string.

use serde_json::json;
use stringnet::correspondence::verify_intertwining;
use stringnet::fusion_data::{builtin_category, verify_category, FusionCategory};
use stringnet::groupoid::build_groupoid;
use stringnet::kitaev::{KitaevModel, EXACT_LIMIT};
use stringnet::lattice::{build_lattice, builtin_lattice, SurfaceLattice};
use stringnet::levin_wen::{lw_ground_space_dimension, LevinWenModel};
use stringnet::representations::block_dimensions;
use stringnet::Error;
use wasm_bindgen::prelude::*;

fn err(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

fn category(src: &str) -> Result<FusionCategory, JsError> {
    if src.trim_start().starts_with('{') {
        FusionCategory::from_json(src).map_err(err)
    } else {
        builtin_category(src.trim()).map_err(err)
    }
}

fn lattice(src: &str) -> Result<SurfaceLattice, JsError> {
    if src.trim_start().starts_with('{') {
        build_lattice(src).map_err(err)
    } else {
        builtin_lattice(src.trim()).map_err(err)
    }
}

/// Category consistency checks plus the groupoid dimension and blocks.
#[wasm_bindgen]
pub fn verify(category_src: &str, tol: f64) -> Result<String, JsError> {
    let cat = category(category_src)?;
    let rep = verify_category(&cat, tol);
    let blocks = block_dimensions(&cat);
    let dim = rep.passed().then(|| build_groupoid(&cat).map(|g| g.dim())).transpose().map_err(err)?;
    Ok(json!({
        "category": cat.name,
        "pass": rep.passed(),
        "groupoid_dim": dim,
        "blocks": blocks,
        "report": rep,
        "text": rep.to_text(),
    })
    .to_string())
}

/// Levin-Wen ground-space dimension.
#[wasm_bindgen]
pub fn levin_wen_gsd(category_src: &str, lattice_src: &str) -> Result<String, JsError> {
    let cat = category(category_src)?;
    let lat = lattice(lattice_src)?;
    let lw = LevinWenModel::new(&cat, &lat).map_err(err)?;
    let g = lw_ground_space_dimension(&lw).map_err(err)?;
    Ok(json!({
        "category": cat.name,
        "lattice": lat.name,
        "gsd": g.gsd,
        "trace": g.trace,
        "admissible": lw.labelings().len(),
    })
    .to_string())
}

/// Kitaev vs Levin-Wen comparison. Kitaev spaces above the exact-trace
/// limit are refused, since the randomized path takes minutes.
#[wasm_bindgen]
pub fn compare(category_src: &str, lattice_src: &str, tol: f64, seed: u32) -> Result<String, JsError> {
    let cat = category(category_src)?;
    let lat = lattice(lattice_src)?;
    let g = build_groupoid(&cat).map_err(err)?;
    let k = KitaevModel::new(&g, &lat).map_err(err)?;
    if k.dim() > EXACT_LIMIT {
        return Err(JsError::new(&format!("Kitaev space has dimension {}; the browser demo stops at {EXACT_LIMIT}", k.dim())));
    }
    let lw = LevinWenModel::new(&cat, &lat).map_err(err)?;
    let rep = verify_intertwining(&k, &lw, tol, seed as u64).map_err(err)?;
    serde_json::to_string(&rep).map_err(|e| JsError::new(&e.to_string()))
}
