//! HTTP API over decision models, their semantics, and decision sessions.
//!
//! | method | path | |
//! |---|---|---|
//! | GET | `/models` | loaded models with issue/alternative counts |
//! | POST | `/models` | upload a model document (201, 400, 422) |
//! | GET | `/models/{id}` | canonical model document |
//! | GET | `/models/{id}/meaning?limit=N&wellFounded=bool` | conforming designs |
//! | POST | `/models/{id}/conformity` | conformity report for a design document |
//! | POST | `/sessions` | start a session: `{"modelId": ...}` |
//! | GET | `/sessions/{sid}` | session resource |
//! | POST | `/sessions/{sid}/choices` | choose: `{"issue": ..., "alternative": ...}` |
//! | DELETE | `/sessions/{sid}/choices/{issue}` | retract, cascading |
//!
//! Error bodies are `{"error": code, "detail": text, "witnesses": [...]}`.
//! Sessions live in memory and expire after an idle period.

mod error;
mod state;

use std::io;

use axum::extract::{Path, Query, Request, State};
use axum::http::StatusCode;
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tokio::net::TcpListener;

use adm_core::formats::{parse_design, parse_model};
use adm_core::{build_model, collect_meaning, conforms, DesignDocument, ModelDocument};

pub use error::ApiError;
pub use state::{AppState, LoadWarning, ModelSummary, SessionResource, DEFAULT_IDLE_TIMEOUT};

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/models", get(list_models).post(upload_model))
        .route("/models/{id}", get(get_model))
        .route("/models/{id}/meaning", get(get_meaning))
        .route("/models/{id}/conformity", post(check_conformity))
        .route("/sessions", post(create_session))
        .route("/sessions/{sid}", get(get_session))
        .route("/sessions/{sid}/choices", post(choose))
        .route("/sessions/{sid}/choices/{issue}", delete(retract))
        .with_state(state)
}

async fn log_requests(request: Request, next: Next) -> Response {
    let method = request.method().clone();
    let uri = request.uri().clone();
    let response = next.run(request).await;
    eprintln!("{method} {uri} -> {}", response.status().as_u16());
    response
}

/// Serves the API on `listener` until the process ends, logging each
/// request to stderr.
pub async fn serve(listener: TcpListener, state: AppState) -> io::Result<()> {
    let app = router(state).layer(middleware::from_fn(log_requests));
    axum::serve(listener, app).await
}

fn parse_json<'a, T: Deserialize<'a>>(body: &'a str) -> Result<T, ApiError> {
    serde_json::from_str(body).map_err(|e| ApiError::bad_request(e.to_string()))
}

async fn list_models(State(state): State<AppState>) -> Json<Vec<ModelSummary>> {
    Json(state.model_summaries())
}

#[derive(Serialize)]
struct Created {
    id: String,
}

async fn upload_model(State(state): State<AppState>, body: String) -> Result<Response, ApiError> {
    let doc = parse_model(&body).map_err(|e| ApiError::bad_request(e.to_string()))?;
    let model = build_model(&doc).map_err(ApiError::ill_formed)?;
    let id = state.add_model(None, model);
    Ok((StatusCode::CREATED, Json(Created { id })).into_response())
}

async fn get_model(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<ModelDocument>, ApiError> {
    let model = state.model(&id)?;
    Ok(Json(ModelDocument::from_model(&model)))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct MeaningQuery {
    limit: Option<usize>,
    #[serde(default)]
    well_founded: bool,
}

#[derive(Serialize)]
struct MeaningBody {
    designs: Vec<DesignDocument>,
    truncated: bool,
}

async fn get_meaning(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(query): Query<MeaningQuery>,
) -> Result<Json<MeaningBody>, ApiError> {
    let model = state.model(&id)?;
    let meaning = collect_meaning(&model, query.limit, query.well_founded);
    Ok(Json(MeaningBody {
        designs: meaning
            .designs
            .iter()
            .map(|d| DesignDocument::from_design(&model, d))
            .collect(),
        truncated: meaning.truncated,
    }))
}

async fn check_conformity(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: String,
) -> Result<Response, ApiError> {
    let model = state.model(&id)?;
    let design = parse_design(&body)
        .map_err(|e| ApiError::bad_request(e.to_string()))?
        .to_design();
    Ok(Json(conforms(&design, &model)).into_response())
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct NewSession {
    model_id: String,
}

async fn create_session(State(state): State<AppState>, body: String) -> Result<Response, ApiError> {
    let request: NewSession = parse_json(&body)?;
    let resource = state.create_session(&request.model_id)?;
    Ok((StatusCode::CREATED, Json(resource)).into_response())
}

async fn get_session(
    State(state): State<AppState>,
    Path(sid): Path<String>,
) -> Result<Json<SessionResource>, ApiError> {
    state.read_session(&sid).map(Json)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Choice {
    issue: String,
    alternative: String,
}

async fn choose(
    State(state): State<AppState>,
    Path(sid): Path<String>,
    body: String,
) -> Result<Json<SessionResource>, ApiError> {
    let choice: Choice = parse_json(&body)?;
    state
        .update_session(&sid, |s| {
            s.choose(&choice.issue, &choice.alternative).map(drop)
        })
        .map(Json)
}

async fn retract(
    State(state): State<AppState>,
    Path((sid, issue)): Path<(String, String)>,
) -> Result<Json<SessionResource>, ApiError> {
    state
        .update_session(&sid, |s| s.retract(&issue).map(drop))
        .map(Json)
}
