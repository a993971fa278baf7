//! Transport-independent request handlers for the `/v1` JSON service.
//!
//! Requests and responses use 1-based vertex and orbit indices. Domain errors
//! answer 422 with a machine-readable code; unparsable bodies answer 400.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::action::FoldingTriple;
use crate::class::{recognize_type, ClassError, Recognition};
use crate::doc::{DocError, QuiverDocument};
use crate::dynkin::{DynkinType, Orientation};
use crate::folding::{check, fold, orbit_mutate, FoldingError, Violation};
use crate::MatrixError;

/// Budget used by recognition requests.
pub const RECOGNIZE_BUDGET: usize = 20_000;

/// Largest vertex count listed by the catalog endpoint.
pub const CATALOG_MAX_VERTICES: usize = 9;

#[derive(Clone, Debug, PartialEq)]
pub struct ApiResponse {
    pub status: u16,
    pub body: Value,
}

impl ApiResponse {
    fn ok(body: Value) -> Self {
        ApiResponse { status: 200, body }
    }

    fn error(status: u16, code: &str, message: impl Into<String>) -> Self {
        ApiResponse { status, body: json!({ "error": { "code": code, "message": message.into() } }) }
    }
}

struct Failure(u16, &'static str, String);

impl From<DocError> for Failure {
    fn from(e: DocError) -> Self {
        match e {
            DocError::Json(m) => Failure(400, "malformed_json", m),
            DocError::Matrix(m) => m.into(),
            DocError::UnsupportedVersion(_) => Failure(422, "unsupported_version", e.to_string()),
            DocError::Action(_) => Failure(422, "invalid_action", e.to_string()),
            DocError::Invalid(_) => Failure(422, "invalid_document", e.to_string()),
        }
    }
}

impl From<MatrixError> for Failure {
    fn from(e: MatrixError) -> Self {
        let code = match e {
            MatrixError::NotSkewSymmetrizable { .. } | MatrixError::InvalidSymmetrizer => "not_skew_symmetrizable",
            MatrixError::IndexOutOfRange { .. } => "index_out_of_range",
            MatrixError::Overflow { .. } => "overflow",
            _ => "invalid_document",
        };
        Failure(422, code, e.to_string())
    }
}

impl From<FoldingError> for Failure {
    fn from(e: FoldingError) -> Self {
        let code = match &e {
            FoldingError::NotAdmissible(_) => "not_admissible",
            FoldingError::NotAnOrbit { .. } => "not_an_orbit",
            FoldingError::DegreeMismatch { .. } => "invalid_action",
            FoldingError::OrderDependent => "order_dependent",
            FoldingError::Matrix(m) => return m.clone().into(),
        };
        Failure(422, code, e.to_string())
    }
}

impl From<ClassError> for Failure {
    fn from(e: ClassError) -> Self {
        let code = match &e {
            ClassError::Disconnected => "disconnected",
            ClassError::Matrix(m) => return m.clone().into(),
            _ => "unsupported",
        };
        Failure(422, code, e.to_string())
    }
}

#[derive(Deserialize)]
struct DocRequest {
    doc: Value,
}

#[derive(Deserialize)]
struct MutateRequest {
    doc: Value,
    k: usize,
}

#[derive(Deserialize)]
struct OrbitRequest {
    doc: Value,
    orbit: usize,
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &[u8]) -> Result<T, Failure> {
    let value: Value = serde_json::from_slice(body).map_err(|e| Failure(400, "malformed_json", e.to_string()))?;
    serde_json::from_value(value).map_err(|e| Failure(422, "invalid_request", e.to_string()))
}

fn parse_doc(value: Value) -> Result<QuiverDocument, Failure> {
    Ok(QuiverDocument::from_value(value, false)?.0)
}

fn one_based(index: usize, what: &str, count: usize) -> Result<usize, Failure> {
    if index == 0 || index > count {
        Err(Failure(422, "index_out_of_range", format!("{what} {index} out of range 1..={count}")))
    } else {
        Ok(index - 1)
    }
}

/// The violated indices, 1-based: `[i, i2, j]` for a sign conflict,
/// `[i, i2]` for an arrow inside an orbit and `[i, j]` for a moved entry.
pub fn witness_indices(v: &Violation) -> Vec<usize> {
    match *v {
        Violation::NotInvariant { i, j, .. } => vec![i + 1, j + 1],
        Violation::EdgeInOrbit { i, i2 } => vec![i + 1, i2 + 1],
        Violation::SignConflict { i, i2, j } => vec![i + 1, i2 + 1, j + 1],
    }
}

/// A violation with 1-based indices.
pub fn witness_json(v: &Violation) -> Value {
    match *v {
        Violation::NotInvariant { generator, i, j } => {
            json!({ "kind": "not_invariant", "generator": generator + 1, "i": i + 1, "j": j + 1 })
        }
        Violation::EdgeInOrbit { i, i2 } => json!({ "kind": "edge_in_orbit", "i": i + 1, "i2": i2 + 1 }),
        Violation::SignConflict { i, i2, j } => {
            json!({ "kind": "sign_conflict", "i": i + 1, "i2": i2 + 1, "j": j + 1 })
        }
    }
}

/// Dispatches one request.
pub fn handle(method: &str, path: &str, body: &[u8]) -> ApiResponse {
    let path = path.trim_end_matches('/');
    let result = match (method, path) {
        ("POST", "/v1/quiver/mutate") => mutate(body),
        ("POST", "/v1/quiver/orbit-mutate") => orbit(body),
        ("POST", "/v1/quiver/check") => check_doc(body),
        ("POST", "/v1/quiver/fold") => fold_doc(body),
        ("POST", "/v1/recognize") => recognize(body),
        ("GET", "/v1/catalog") => Ok(catalog()),
        (
            _,
            "/v1/quiver/mutate"
            | "/v1/quiver/orbit-mutate"
            | "/v1/quiver/check"
            | "/v1/quiver/fold"
            | "/v1/recognize"
            | "/v1/catalog",
        ) => Err(Failure(405, "method_not_allowed", format!("{method} not allowed on {path}"))),
        _ => Err(Failure(404, "not_found", format!("no route {path}"))),
    };
    match result {
        Ok(body) => ApiResponse::ok(body),
        Err(Failure(status, code, message)) => ApiResponse::error(status, code, message),
    }
}

fn mutate(body: &[u8]) -> Result<Value, Failure> {
    let req: MutateRequest = parse_body(body)?;
    let doc = parse_doc(req.doc)?;
    let m = doc.matrix()?;
    let k = one_based(req.k, "vertex", m.n())?;
    let out = m.mutate(k)?;
    Ok(json!({ "doc": doc.with_matrix(&out) }))
}

fn require_action(doc: &QuiverDocument) -> Result<crate::GroupAction, Failure> {
    doc.group_action()?.ok_or_else(|| Failure(422, "missing_action", "document has no group action".into()))
}

fn orbit(body: &[u8]) -> Result<Value, Failure> {
    let req: OrbitRequest = parse_body(body)?;
    let doc = parse_doc(req.doc)?;
    let m = doc.matrix()?;
    let a = require_action(&doc)?;
    let idx =
        req.orbit.checked_sub(1).ok_or_else(|| Failure(422, "not_an_orbit", "orbit indices start at 1".into()))?;
    let out = orbit_mutate(&m, &a, idx)?;
    Ok(json!({ "doc": doc.with_matrix(&out) }))
}

fn check_doc(body: &[u8]) -> Result<Value, Failure> {
    let req: DocRequest = parse_body(body)?;
    let doc = parse_doc(req.doc)?;
    let m = doc.matrix()?;
    let a = require_action(&doc)?;
    let report = check(&m, &a)?;
    Ok(json!({
        "invariant": report.invariant,
        "admissible": report.admissible,
        "witness": report.witness.as_ref().map(witness_indices),
        "violation": report.witness.as_ref().map(witness_json),
    }))
}

fn fold_doc(body: &[u8]) -> Result<Value, Failure> {
    let req: DocRequest = parse_body(body)?;
    let doc = parse_doc(req.doc)?;
    let m = doc.matrix()?;
    let a = require_action(&doc)?;
    let folded = fold(&m, &a)?;
    let orbits: Vec<Vec<usize>> = a.orbits().iter().map(|o| o.iter().map(|v| v + 1).collect()).collect();
    Ok(json!({ "doc": QuiverDocument::from_matrix(&folded, None), "orbits": orbits }))
}

fn recognize(body: &[u8]) -> Result<Value, Failure> {
    let req: DocRequest = parse_body(body)?;
    let doc = parse_doc(req.doc)?;
    let m = doc.matrix()?;
    Ok(match recognize_type(&m, RECOGNIZE_BUDGET)? {
        Recognition::Type(t) => json!({ "result": "type", "type": t.to_string() }),
        Recognition::Unknown => json!({ "result": "unknown", "type": null }),
    })
}

/// Affine types with at most `max_vertices` vertices, in a fixed order.
pub fn catalog_types(max_vertices: usize) -> Vec<DynkinType> {
    let mut out: Vec<DynkinType> =
        (2..=max_vertices).flat_map(DynkinType::with_vertex_count).filter(DynkinType::is_affine).collect();
    out.sort();
    out
}

/// The document for a type name or folding triple (`X/G/Y` or `X/G`).
///
/// Types use their default orientation; triples use the bipartite
/// orientation, which the standard action fixes, and carry the action.
pub fn catalog_document(name: &str) -> Result<QuiverDocument, String> {
    if name.contains('/') {
        let triple: FoldingTriple = name.parse().map_err(|e: crate::ActionError| e.to_string())?;
        let (m, a) = crate::folding::standard_folding(&triple);
        let mut doc = QuiverDocument::from_matrix(&m, Some(&a));
        doc.type_name = Some(triple.source.to_string());
        Ok(doc)
    } else {
        let t: DynkinType = name.parse().map_err(|e: crate::DynkinError| e.to_string())?;
        let m = t.diagram(&Orientation::Default).map_err(|e| e.to_string())?;
        let mut doc = QuiverDocument::from_matrix(&m, None);
        doc.type_name = Some(t.to_string());
        Ok(doc)
    }
}

fn catalog() -> Value {
    let types: Vec<Value> = catalog_types(CATALOG_MAX_VERTICES)
        .into_iter()
        .map(|t| {
            json!({
                "name": t.to_string(),
                "vertices": t.vertex_count(),
                "twisted": t.is_twisted(),
                "doc": catalog_document(&t.to_string()).expect("catalog types have diagrams"),
            })
        })
        .collect();
    let triples: Vec<Value> = FoldingTriple::all(CATALOG_MAX_VERTICES)
        .into_iter()
        .map(|t| {
            json!({
                "name": t.to_string(),
                "source": t.source.to_string(),
                "group": t.group.to_string(),
                "target": t.target.to_string(),
                "doc": catalog_document(&t.to_string()).expect("standard triples have diagrams"),
            })
        })
        .collect();
    json!({ "types": types, "triples": triples })
}
