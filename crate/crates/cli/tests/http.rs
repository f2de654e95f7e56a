use axum::body::{to_bytes, Body};
use axum::http::{Request, StatusCode};
use axum::Router;
use serde_json::{json, Value};
use sgplan::roadmap::{RoadMap, SubgraphEntry, SubgraphKind};
use sgplan::session::{PreviewRequest, Session, SuggestRequest};
use sgplan_cli::server::router;
use tower::ServiceExt;

fn c6() -> RoadMap {
    RoadMap::undirected(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap()
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<&str>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, |b| Body::from(b.to_string())))
        .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = to_bytes(res.into_body(), usize::MAX).await.unwrap();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap()
    };
    (status, value)
}

fn hall(vertices: &[usize]) -> String {
    json!({ "subgraph": { "kind": "hall", "vertices": vertices } }).to_string()
}

#[tokio::test]
async fn map_round_trips() {
    let app = router(Session::new(c6()));
    let (status, body) = call(&app, "GET", "/map", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, serde_json::to_value(c6().to_file()).unwrap());
    let (status, body) = call(&app, "GET", "/partition", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["subgraphs"], json!([]));
}

#[tokio::test]
async fn suggest_ranks_the_ring_first_and_matches_the_library() {
    let app = router(Session::new(c6()));
    let (status, body) = call(&app, "POST", "/suggest", Some(r#"{"seed":[0,1]}"#)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body[0]["kind"], "ring");
    assert_eq!(body[0]["vertices"].as_array().unwrap().len(), 6);
    let direct = Session::new(c6())
        .suggest(&SuggestRequest {
            seed: (0, 1),
            kind: None,
        })
        .unwrap();
    assert_eq!(body, serde_json::to_value(direct).unwrap());
}

#[tokio::test]
async fn commit_conflicts_and_undo() {
    let app = router(Session::new(c6()));
    let (status, body) = call(&app, "POST", "/partition/commit", Some(&hall(&[0, 1, 2]))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["id"], 0);

    let (status, body) = call(&app, "POST", "/partition/commit", Some(&hall(&[2, 3]))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert!(body["error"].as_str().unwrap().contains("vertex 2"));

    let (status, _) = call(&app, "POST", "/suggest", Some(r#"{"seed":[1,2]}"#)).await;
    assert_eq!(status, StatusCode::CONFLICT);

    // 3-5 is not an edge, so this cannot be a clique.
    let clique = json!({ "subgraph": { "kind": "clique", "vertices": [3, 5] } }).to_string();
    let (status, _) = call(&app, "POST", "/partition/commit", Some(&clique)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    let (status, body) = call(&app, "POST", "/partition/undo", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["subgraphs"], json!([]));
    let (status, _) = call(&app, "POST", "/partition/undo", None).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn validate_reports_then_clears() {
    let app = router(Session::new(c6()));
    call(&app, "POST", "/partition/commit", Some(&hall(&[0, 1, 2]))).await;
    let (status, body) = call(&app, "POST", "/partition/validate", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body.as_array().unwrap().len(), 3);
    call(&app, "POST", "/partition/commit", Some(&hall(&[3, 4, 5]))).await;
    let (_, body) = call(&app, "POST", "/partition/validate", None).await;
    assert_eq!(body, json!([]));
}

#[tokio::test]
async fn malformed_requests_are_bad_requests() {
    let app = router(Session::new(c6()));
    for (uri, body) in [
        ("/suggest", "{not json"),
        ("/suggest", r#"{"seed":[0]}"#),
        ("/suggest", r#"{"seed":[0,1],"colour":"red"}"#),
        ("/partition/commit", r#"{"subgraph":{"kind":"tower","vertices":[0]}}"#),
        ("/plan/preview", r#"{"algorithm":"naive"}"#),
    ] {
        let (status, value) = call(&app, "POST", uri, Some(body)).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{uri} {body}");
        assert!(value["error"].is_string());
    }
    let (status, _) = call(&app, "POST", "/suggest", Some(r#"{"seed":[0,3]}"#)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let (status, _) = call(&app, "POST", "/partition/commit", Some(&hall(&[5, 6]))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn preview_matches_the_library() {
    let mut session = Session::new(c6());
    session
        .commit(SubgraphEntry {
            kind: SubgraphKind::Ring,
            vertices: vec![0, 1, 2, 3, 4, 5],
        })
        .unwrap();
    let req = r#"{"problem":{"robots":[{"id":1,"start":0,"goal":3},{"id":2,"start":3,"goal":0}]},
                  "algorithm":"subgraph","strategy":"bfs"}"#;
    let parsed: PreviewRequest = serde_json::from_str(req).unwrap();
    let mut direct = serde_json::to_value(session.preview(&parsed).unwrap()).unwrap();

    let app = router(session);
    let (status, mut body) = call(&app, "POST", "/plan/preview", Some(req)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["solved"], true);
    assert!(body["plan"]["steps"].as_array().is_some_and(|s| !s.is_empty()));
    // Wall time is the only field allowed to differ between runs.
    body["metrics"]["wall_ms"] = Value::Null;
    direct["metrics"]["wall_ms"] = Value::Null;
    assert_eq!(body, direct);

    let off_map = r#"{"problem":{"robots":[{"id":1,"start":0,"goal":9}]},"algorithm":"naive"}"#;
    let (status, _) = call(&app, "POST", "/plan/preview", Some(off_map)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn cors_headers_present() {
    let app = router(Session::new(c6()));
    let req = Request::builder()
        .method("OPTIONS")
        .uri("/suggest")
        .header("origin", "http://localhost:5173")
        .header("access-control-request-method", "POST")
        .body(Body::empty())
        .unwrap();
    let res = app.oneshot(req).await.unwrap();
    assert!(res.headers().contains_key("access-control-allow-origin"));
}
