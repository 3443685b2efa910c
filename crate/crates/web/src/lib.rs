//! Browser bindings: normalize a formula, evaluate it in an algebra, and
//! search small algebras for a countermodel. Everything goes in and out as
//! strings so the page can show the JSON as is.

use wasm_bindgen::prelude::*;

use gclogic::alg_semantics::{eval, find_algebraic_countermodel, AlgValuation};
use gclogic::formula::{parse, print};
use gclogic::io::{algebra_witness_to_json, from_json, load_algebra, to_json};

/// Largest algebra the page will search.
pub const MAX_DEMO_SIZE: usize = 5;

/// The formula printed back with minimal parentheses.
#[wasm_bindgen]
pub fn normalize(expr: &str) -> Result<String, String> {
    parse(expr).map(|f| print(&f)).map_err(|e| e.to_string())
}

/// Value of `expr` in the algebra under `valuation`, a JSON object from
/// variables to element names.
#[wasm_bindgen]
pub fn evaluate(algebra_json: &str, valuation_json: &str, expr: &str) -> Result<String, String> {
    let f = parse(expr).map_err(|e| e.to_string())?;
    let loaded = load_algebra(algebra_json).map_err(|e| e.to_string())?;
    if !loaded.has_ops() && !f.is_modal_free() {
        return Err("the algebra has no operator tables".into());
    }
    let alg = loaded.to_h2gc();
    let names: std::collections::BTreeMap<String, String> =
        from_json(valuation_json).map_err(|e| e.to_string())?;
    let mut v = AlgValuation::new();
    for (p, a) in names {
        let e = alg
            .elem(&a)
            .ok_or_else(|| format!("unknown element `{a}`"))?;
        v.insert(p, e);
    }
    let value = eval(&f, &alg, &v).map_err(|e| e.to_string())?;
    Ok(alg.name(value).to_string())
}

/// A refuting algebra and valuation as JSON, or `null` when every algebra
/// up to `max_size` elements validates the formula.
#[wasm_bindgen]
pub fn countermodel(expr: &str, max_size: usize, fs: bool) -> Result<String, String> {
    let f = parse(expr).map_err(|e| e.to_string())?;
    let max_size = max_size.min(MAX_DEMO_SIZE);
    match find_algebraic_countermodel(&f, max_size, fs, 1).map_err(|e| e.to_string())? {
        Some((alg, v)) => Ok(to_json(&algebra_witness_to_json(&alg, &v))),
        None => Ok("null".into()),
    }
}
