use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use partiti_core::format::parse_puzzle;
use partiti_core::service::{router, Service};
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: axum::Router, req: Request<Body>) -> (StatusCode, String, Option<String>) {
    let resp = app.oneshot(req).await.unwrap();
    let status = resp.status();
    let ctype = resp
        .headers()
        .get("content-type")
        .map(|v| v.to_str().unwrap().to_owned());
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap(), ctype)
}

fn app() -> axum::Router {
    router(Arc::new(Service::new()), None)
}

fn get(uri: &str) -> Request<Body> {
    Request::get(uri).body(Body::empty()).unwrap()
}

fn post(uri: &str, body: &Value) -> Request<Body> {
    Request::post(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap()
}

fn corner_state(marks: Value) -> Value {
    json!({
        "puzzle": {"inline": {"version": 1, "rows": 2, "cols": 2, "clues": [[2, 3], [22, 18]]}},
        "marks": marks,
        "elapsed": 12,
    })
}

#[tokio::test]
async fn puzzle_endpoint_hides_solution_and_is_reproducible() {
    let uri = "/api/puzzle?difficulty=medium&seed=42&rows=6&cols=6";
    let (status, body, ctype) = call(app(), get(uri)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(ctype.as_deref(), Some("application/json"));
    let doc = parse_puzzle(&body).unwrap();
    assert!(doc.solution.is_none());
    assert!(!body.contains("solution"));
    let (_, again, _) = call(app(), get(uri)).await;
    assert_eq!(body, again);
}

#[tokio::test]
async fn generated_reference_resolves_statelessly() {
    let (_, body, _) = call(app(), get("/api/puzzle?seed=5&rows=4&cols=4")).await;
    let v: Value = serde_json::from_str(&body).unwrap();
    let id = v["meta"]["id"].as_str().unwrap().to_owned();
    let state = json!({
        "puzzle": {"generated": {"id": id, "rows": 4, "cols": 4, "seed": 5}},
        "marks": vec![vec![Vec::<u8>::new(); 4]; 4],
    });
    // Fresh router: nothing cached from the GET above.
    let (status, body, _) = call(app(), post("/api/validate", &state)).await;
    assert_eq!((status, body.as_str()), (StatusCode::OK, "[]"));
    let (status, body, _) = call(app(), post("/api/hint", &state)).await;
    assert_eq!(status, StatusCode::OK);
    let h: Value = serde_json::from_str(&body).unwrap();
    assert!(h["cell"].is_array() && h["forced"].is_array() && h["explanation"].is_string());

    let mut unknown = state.clone();
    unknown["puzzle"]["generated"]["seed"] = json!(6);
    let (status, body, _) = call(app(), post("/api/check", &unknown)).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(serde_json::from_str::<Value>(&body).unwrap()["code"], "unknown_puzzle");
}

#[tokio::test]
async fn validate_hint_check_on_inline_puzzle() {
    let (s, body, _) = call(
        app(),
        post("/api/validate", &corner_state(json!([[[2], []], [[], [2]]]))),
    )
    .await;
    assert_eq!(s, StatusCode::OK);
    let v: Value = serde_json::from_str(&body).unwrap();
    let kinds: Vec<_> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["kind"].as_str().unwrap())
        .collect();
    assert!(kinds.contains(&"NeighborOverlap"), "{body}");

    let (_, body, _) = call(app(), post("/api/hint", &corner_state(json!([[[2], []], [[], []]])))).await;
    let h: Value = serde_json::from_str(&body).unwrap();
    assert_eq!((h["cell"].clone(), h["forced"].clone()), (json!([0, 1]), json!([3])));
    assert_eq!(h["rule"], "RequiredDigitExclusion");

    let solved = json!([[[2], [3]], [[1, 5, 7, 9], [4, 6, 8]]]);
    let (_, body, _) = call(app(), post("/api/hint", &corner_state(solved.clone()))).await;
    assert_eq!(body, "null");
    let (_, body, _) = call(app(), post("/api/check", &corner_state(solved))).await;
    assert_eq!(
        serde_json::from_str::<Value>(&body).unwrap(),
        json!({"solved": true, "violations": []})
    );

    let moved = json!([[[2], [3]], [[1, 5, 7], [4, 6, 8, 9]]]);
    let (_, body, _) = call(app(), post("/api/check", &corner_state(moved))).await;
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["solved"], false);
    assert!(v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .any(|x| x["kind"] == "WrongSum"));
}

#[tokio::test]
async fn errors_are_structured() {
    let (s, body, _) = call(app(), get("/api/puzzle?difficulty=fiendish")).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(serde_json::from_str::<Value>(&body).unwrap()["code"], "bad_request");

    let bad = corner_state(json!([[[3, 2], []], [[], []]]));
    let (s, body, _) = call(app(), post("/api/validate", &bad)).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(
        (v["code"].clone(), v["locus"].clone()),
        (json!("invalid_state"), json!([0, 0]))
    );

    let mut extra = corner_state(json!([[[], []], [[], []]]));
    extra["cheat"] = json!(true);
    let (s, _, _) = call(app(), post("/api/check", &extra)).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);

    let (s, body, _) = call(app(), post("/api/hint", &corner_state(json!([[[2], [2]], [[], []]])))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(serde_json::from_str::<Value>(&body).unwrap()["code"], "rule_violation");

    let (s, body, _) = call(app(), get("/api/nope")).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(serde_json::from_str::<Value>(&body).unwrap()["code"], "not_found");
}

#[tokio::test]
async fn serves_static_assets() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<p>partiti</p>").unwrap();
    let app = router(Arc::new(Service::new()), Some(dir.path().to_path_buf()));
    let (s, body, _) = call(app.clone(), get("/index.html")).await;
    assert_eq!((s, body.as_str()), (StatusCode::OK, "<p>partiti</p>"));
    let (s, _, _) = call(app.clone(), get("/")).await;
    assert_eq!(s, StatusCode::OK);
    let (s, _, _) = call(app, get("/missing.js")).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn own_solution_checks_as_solved_by_reference() {
    use partiti_core::generator::{generate_puzzle, GeneratorConfig};
    use partiti_core::GridDims;

    let dims = GridDims::new(5, 5).unwrap();
    let puzzle = generate_puzzle(&GeneratorConfig::new(dims, 77)).unwrap();
    let marks = puzzle.solution.to_rows();
    let state = json!({
        "puzzle": {"generated": {"id": puzzle.id, "rows": 5, "cols": 5, "seed": 77}},
        "marks": marks,
    });
    let (s, body, _) = call(app(), post("/api/check", &state)).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(
        serde_json::from_str::<Value>(&body).unwrap(),
        json!({"solved": true, "violations": []})
    );
    assert!(!body.contains("solution"));
}
