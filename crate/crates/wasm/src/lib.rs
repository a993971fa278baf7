//! Browser bindings for the demo page in `www/`.
//!
//! Every binding takes and returns JSON text with 1-based indices and the
//! same error objects as the HTTP service.

use affold::api::{self, catalog_document, CATALOG_MAX_VERTICES};
use affold::FoldingTriple;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn call(method: &str, path: &str, body: Value) -> Result<String, String> {
    let r = api::handle(method, path, body.to_string().as_bytes());
    if r.status == 200 {
        Ok(r.body.to_string())
    } else {
        Err(r.body.to_string())
    }
}

fn parse(doc: &str) -> Result<Value, String> {
    serde_json::from_str(doc)
        .map_err(|e| json!({ "error": { "code": "malformed_json", "message": e.to_string() } }).to_string())
}

/// Names of the affine types and folding triples offered by the page.
pub fn catalog_names_json() -> String {
    let types = api::catalog_types(CATALOG_MAX_VERTICES).iter().map(ToString::to_string).collect::<Vec<_>>();
    let triples = FoldingTriple::all(CATALOG_MAX_VERTICES).iter().map(ToString::to_string).collect::<Vec<_>>();
    json!({ "types": types, "triples": triples }).to_string()
}

pub fn catalog_json(name: &str) -> Result<String, String> {
    let doc =
        catalog_document(name).map_err(|m| json!({ "error": { "code": "unsupported", "message": m } }).to_string())?;
    Ok(serde_json::to_string(&doc).expect("documents serialize"))
}

pub fn mutate_json(doc: &str, k: usize) -> Result<String, String> {
    call("POST", "/v1/quiver/mutate", json!({ "doc": parse(doc)?, "k": k }))
}

pub fn orbit_mutate_json(doc: &str, orbit: usize) -> Result<String, String> {
    call("POST", "/v1/quiver/orbit-mutate", json!({ "doc": parse(doc)?, "orbit": orbit }))
}

/// Admissibility report and, when admissible, the folded document.
pub fn inspect_json(doc: &str) -> Result<String, String> {
    let doc = parse(doc)?;
    let check: Value =
        serde_json::from_str(&call("POST", "/v1/quiver/check", json!({ "doc": doc }))?).expect("valid JSON");
    let fold = if check["admissible"] == json!(true) {
        serde_json::from_str(&call("POST", "/v1/quiver/fold", json!({ "doc": doc }))?).expect("valid JSON")
    } else {
        Value::Null
    };
    Ok(json!({ "check": check, "fold": fold }).to_string())
}

#[wasm_bindgen]
pub fn catalog_names() -> String {
    catalog_names_json()
}

#[wasm_bindgen]
pub fn catalog(name: &str) -> Result<String, JsValue> {
    catalog_json(name).map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn mutate(doc: &str, k: usize) -> Result<String, JsValue> {
    mutate_json(doc, k).map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn orbit_mutate(doc: &str, orbit: usize) -> Result<String, JsValue> {
    orbit_mutate_json(doc, orbit).map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn inspect(doc: &str) -> Result<String, JsValue> {
    inspect_json(doc).map_err(JsValue::from)
}
