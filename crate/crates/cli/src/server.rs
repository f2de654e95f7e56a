//! HTTP API for the partition editor.
//!
//! Every body is JSON. Errors come back as `{"error": "..."}` with 400 for a
//! malformed request, 409 when a change clashes with committed subgraphs (or
//! there is nothing to undo) and 422 when the request is well-formed but
//! describes something invalid.

use std::sync::{Arc, RwLock};

use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Serialize;
use serde_json::json;
use sgplan::roadmap::{MapFile, PartitionFile, Violation};
use sgplan::session::{CommitRequest, PreviewRequest, PreviewResponse, Session, SessionError, SuggestRequest};
use tower_http::cors::CorsLayer;

pub type Shared = Arc<RwLock<Session>>;

#[derive(Debug)]
pub struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        ApiError(StatusCode::BAD_REQUEST, r.body_text())
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let code = match &e {
            SessionError::Conflict { .. } | SessionError::NothingToUndo => StatusCode::CONFLICT,
            SessionError::Invalid(_) | SessionError::Planner(_) => StatusCode::UNPROCESSABLE_ENTITY,
            SessionError::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError(code, e.to_string())
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

#[derive(Serialize)]
pub struct Committed {
    pub id: usize,
    pub partition: PartitionFile,
}

pub fn router(session: Session) -> Router {
    routes(Arc::new(RwLock::new(session)))
}

pub fn routes(state: Shared) -> Router {
    Router::new()
        .route("/map", get(map))
        .route("/partition", get(partition))
        .route("/suggest", post(suggest))
        .route("/partition/commit", post(commit))
        .route("/partition/undo", post(undo))
        .route("/partition/validate", post(validate))
        .route("/plan/preview", post(preview))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

// A poisoned lock only means a handler panicked; the session itself is
// never left half-updated, so carry on with it.
fn read(s: &Shared) -> std::sync::RwLockReadGuard<'_, Session> {
    s.read().unwrap_or_else(|e| e.into_inner())
}

fn write(s: &Shared) -> std::sync::RwLockWriteGuard<'_, Session> {
    s.write().unwrap_or_else(|e| e.into_inner())
}

async fn map(State(s): State<Shared>) -> Json<MapFile> {
    Json(read(&s).map().to_file())
}

async fn partition(State(s): State<Shared>) -> Json<PartitionFile> {
    Json(read(&s).partition().to_file())
}

async fn suggest(
    State(s): State<Shared>,
    body: Result<Json<SuggestRequest>, JsonRejection>,
) -> ApiResult<Vec<sgplan::partitioner::Candidate>> {
    let Json(req) = body?;
    Ok(Json(read(&s).suggest(&req)?))
}

async fn commit(State(s): State<Shared>, body: Result<Json<CommitRequest>, JsonRejection>) -> ApiResult<Committed> {
    let Json(req) = body?;
    let mut session = write(&s);
    let id = session.commit(req.subgraph)?;
    Ok(Json(Committed {
        id,
        partition: session.partition().to_file(),
    }))
}

async fn undo(State(s): State<Shared>) -> ApiResult<PartitionFile> {
    let mut session = write(&s);
    session.undo()?;
    Ok(Json(session.partition().to_file()))
}

async fn validate(State(s): State<Shared>) -> Json<Vec<Violation>> {
    Json(read(&s).validate())
}

async fn preview(
    State(s): State<Shared>,
    body: Result<Json<PreviewRequest>, JsonRejection>,
) -> ApiResult<PreviewResponse> {
    let Json(req) = body?;
    // Searches can run for a while; keep them off the async workers.
    let out = tokio::task::spawn_blocking(move || read(&s).preview(&req))
        .await
        .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    Ok(Json(out?))
}
