use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(method: &str, path: &str, body: &str) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(path)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let resp = affold_cli::router().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap())
}

fn kronecker() -> Value {
    json!({ "version": 1, "n": 2, "b": [[0, 2], [-2, 0]] })
}

fn e6_z3() -> Value {
    serde_json::to_value(affold::api::catalog_document("E~6/Z3").unwrap()).unwrap()
}

#[tokio::test]
async fn mutate_returns_the_mutated_document() {
    let body = json!({ "doc": kronecker(), "k": 1 }).to_string();
    let (status, v) = call("POST", "/v1/quiver/mutate", &body).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["doc"]["b"], json!([[0, -2], [2, 0]]));
}

#[tokio::test]
async fn orbit_mutate_twice_is_the_identity() {
    let doc = e6_z3();
    let body = json!({ "doc": doc, "orbit": 2 }).to_string();
    let (status, once) = call("POST", "/v1/quiver/orbit-mutate", &body).await;
    assert_eq!(status, StatusCode::OK);
    assert_ne!(once["doc"]["b"], doc["b"]);
    let body = json!({ "doc": once["doc"], "orbit": 2 }).to_string();
    let (_, twice) = call("POST", "/v1/quiver/orbit-mutate", &body).await;
    assert_eq!(twice["doc"]["b"], doc["b"]);
}

#[tokio::test]
async fn check_and_fold_the_e6_triple() {
    let body = json!({ "doc": e6_z3() }).to_string();
    let (status, v) = call("POST", "/v1/quiver/check", &body).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["admissible"], json!(true));
    assert_eq!(v["witness"], Value::Null);
    let (status, v) = call("POST", "/v1/quiver/fold", &body).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["doc"]["n"], json!(3));
    assert_eq!(v["orbits"], json!([[1], [2, 4, 6], [3, 5, 7]]));
}

#[tokio::test]
async fn recognize_and_catalog() {
    let doc = serde_json::to_value(affold::api::catalog_document("E~7").unwrap()).unwrap();
    let (status, v) = call("POST", "/v1/recognize", &json!({ "doc": doc }).to_string()).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["type"], json!("E~7"));
    let (status, v) = call("GET", "/v1/catalog", "").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["triples"].as_array().unwrap().len(), 21);
}

#[tokio::test]
async fn malformed_json_is_400() {
    let (status, v) = call("POST", "/v1/quiver/mutate", "{not json").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"]["code"], json!("malformed_json"));
}

#[tokio::test]
async fn domain_errors_are_422_with_codes() {
    let cases = [
        ("/v1/quiver/mutate", json!({ "doc": kronecker(), "k": 3 }), "index_out_of_range"),
        (
            "/v1/quiver/mutate",
            json!({ "doc": { "version": 1, "n": 2, "b": [[0, 1], [1, 0]] }, "k": 1 }),
            "not_skew_symmetrizable",
        ),
        (
            "/v1/quiver/mutate",
            json!({ "doc": { "version": 2, "n": 2, "b": [[0, 1], [-1, 0]] }, "k": 1 }),
            "unsupported_version",
        ),
        ("/v1/quiver/check", json!({ "doc": kronecker() }), "missing_action"),
        ("/v1/quiver/orbit-mutate", json!({ "doc": e6_z3(), "orbit": 4 }), "not_an_orbit"),
        ("/v1/quiver/mutate", json!({ "k": 1 }), "invalid_request"),
    ];
    for (path, body, code) in cases {
        let (status, v) = call("POST", path, &body.to_string()).await;
        assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{path} {body}");
        assert_eq!(v["error"]["code"], json!(code), "{path} {body}");
    }
}

#[tokio::test]
async fn inadmissible_fold_is_422() {
    let doc = json!({
        "version": 1, "n": 3, "b": [[0, 1, 0], [-1, 0, 1], [0, -1, 0]],
        "action": { "group": "Z2", "generators": [[3, 2, 1]] }
    });
    let (status, v) = call("POST", "/v1/quiver/fold", &json!({ "doc": doc }).to_string()).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(v["error"]["code"].is_string());
}

#[tokio::test]
async fn unknown_routes_and_methods() {
    let (status, _) = call("GET", "/v1/nothing", "").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call("GET", "/v1/quiver/mutate", "").await;
    assert_eq!(status, StatusCode::METHOD_NOT_ALLOWED);
}
