//! Browser bindings. Every export takes and returns JSON text so the page
//! can stay free of generated type glue.
//!
//! The plain functions in [`api`] do the work and are tested natively; the
//! `#[wasm_bindgen]` wrappers only convert errors into JavaScript exceptions.

use wasm_bindgen::prelude::*;

pub mod api;

fn js<T>(r: Result<T, String>) -> Result<T, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// Ids of the bundled corpus entries, as a JSON array.
#[wasm_bindgen(js_name = corpusIds)]
pub fn corpus_ids() -> String {
    api::corpus_ids()
}

/// The surface of a bundled entry, as surface JSON.
#[wasm_bindgen(js_name = corpusSurface)]
pub fn corpus_surface(id: &str) -> Result<String, JsValue> {
    js(api::corpus_surface(id))
}

/// The gentle algebra of a dissection, as algebra JSON.
#[wasm_bindgen(js_name = algebraOfSurface)]
pub fn algebra_of_surface(surface: &str) -> Result<String, JsValue> {
    js(api::algebra_of_surface(surface))
}

/// Ext dimensions between two strings, computed both algebraically and by counting intersections.
#[wasm_bindgen]
pub fn ext(surface: &str, x: &str, y: &str) -> Result<String, JsValue> {
    js(api::ext(surface, x, y))
}

/// Cuts along the arc with the given string and returns the cut result JSON.
#[wasm_bindgen]
pub fn cut(surface: &str, arc: &str) -> Result<String, JsValue> {
    js(api::cut(surface, arc))
}

/// Graphviz source for the quiver of the dissection.
#[wasm_bindgen(js_name = emitDot)]
pub fn emit_dot(surface: &str) -> Result<String, JsValue> {
    js(api::emit_dot(surface))
}
