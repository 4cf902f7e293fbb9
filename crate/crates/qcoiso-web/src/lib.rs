//! wasm-bindgen entry points for the static demo page in `www/`.
//!
//! Each export has a plain Rust twin returning `Result<String, String>` so the
//! logic can be tested natively.

use qcoiso::render::{identity_text, report_text};
use qcoiso::rootsys::{CartanType, RootSystem};
use qcoiso::verify::{golden, run_full_verification, solve_golden, VerifyOptions, GOLDEN_NAMES};
use wasm_bindgen::prelude::*;

/// Largest recipe degree the page will verify; bigger cases belong on the command line.
pub const MAX_WEB_DEGREE: usize = 5;

fn cartan(ty: &str, rank: usize) -> Result<CartanType, String> {
    CartanType::parse(ty, rank).map_err(|e| e.to_string())
}

/// Positive roots as JSON: `[{root, simple, admissible}]`.
pub fn roots_json(ty: &str, rank: usize) -> Result<String, String> {
    let rs = RootSystem::build(cartan(ty, rank)?).map_err(|e| e.to_string())?;
    let rows: Vec<_> = rs
        .positive_roots
        .iter()
        .map(|r| serde_json::json!({"root": rs.format_root(r), "simple": r.simple_decomp, "admissible": rs.is_admissible(r)}))
        .collect();
    Ok(serde_json::Value::Array(rows).to_string())
}

pub fn solve_text(name: &str) -> Result<String, String> {
    let g = golden(name).ok_or_else(|| format!("unknown identity {name}; known: {}", GOLDEN_NAMES.join(", ")))?;
    Ok(identity_text(&solve_golden(&g)))
}

pub fn verify_text(ty: &str, rank: usize, beta: &str) -> Result<String, String> {
    let t = cartan(ty, rank)?;
    let rs = RootSystem::build(t).map_err(|e| e.to_string())?;
    let root = rs.parse_root(beta).map_err(|e| e.to_string())?;
    if let Ok(r) = qcoiso::recipes::builtin_recipe(t, &root) {
        if r.max_degree() > MAX_WEB_DEGREE {
            return Err(format!("recipe degree {} is above the page limit {MAX_WEB_DEGREE}; use the command line", r.max_degree()));
        }
    }
    let opts = VerifyOptions { timings: false, ..Default::default() };
    let rep = run_full_verification(t, beta, None, &opts).map_err(|e| e.to_string())?;
    Ok(report_text(&rep))
}

#[wasm_bindgen]
pub fn roots(ty: &str, rank: usize) -> Result<String, JsError> {
    roots_json(ty, rank).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn solve(name: &str) -> Result<String, JsError> {
    solve_text(name).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn verify(ty: &str, rank: usize, beta: &str) -> Result<String, JsError> {
    verify_text(ty, rank, beta).map_err(|e| JsError::new(&e))
}
