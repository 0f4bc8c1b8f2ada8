use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

use super::store::{ServiceError, SessionStore};

/// Listen address, used when neither a flag nor `CONCORD_ADDR` is given.
pub const DEFAULT_ADDR: &str = "127.0.0.1:8080";

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub addr: SocketAddr,
    /// Directory for per-session JSON snapshots; in-memory only when unset.
    pub state_dir: Option<PathBuf>,
    /// Built UI bundle served at `/`.
    pub ui_dir: Option<PathBuf>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    code: &'a str,
    message: String,
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = match self {
            ServiceError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ServiceError::NotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        let body = ErrorBody {
            code: self.code(),
            message: self.to_string(),
        };
        (status, Json(body)).into_response()
    }
}

fn parse_body<T: DeserializeOwned>(body: &[u8]) -> Result<T, ServiceError> {
    serde_json::from_slice(body).map_err(|e| ServiceError::BadRequest(format!("invalid request body: {e}")))
}

#[derive(Deserialize)]
struct CreateSession {
    labels: Vec<String>,
}

#[derive(Deserialize)]
struct PutJudgment {
    i: usize,
    j: usize,
    value: f64,
}

type AppState = State<Arc<SessionStore>>;

async fn create_session(State(store): AppState, body: Bytes) -> Result<Response, ServiceError> {
    let req: CreateSession = parse_body(&body)?;
    let session = store.create(req.labels)?;
    Ok((StatusCode::CREATED, Json(session)).into_response())
}

async fn get_session(State(store): AppState, Path(id): Path<String>) -> Result<Response, ServiceError> {
    Ok(Json(store.get(&id)?).into_response())
}

async fn put_judgment(
    State(store): AppState,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ServiceError> {
    let req: PutJudgment = parse_body(&body)?;
    Ok(Json(store.put_judgment(&id, req.i, req.j, req.value)?).into_response())
}

async fn get_analysis(State(store): AppState, Path(id): Path<String>) -> Result<Response, ServiceError> {
    Ok(Json(store.analysis(&id)?).into_response())
}

async fn delete_session(State(store): AppState, Path(id): Path<String>) -> Result<StatusCode, ServiceError> {
    store.delete(&id)?;
    Ok(StatusCode::NO_CONTENT)
}

async fn fallback() -> ServiceError {
    ServiceError::NotFound("no such route".into())
}

/// The HTTP API over `store`, with the UI bundle mounted at `/` if given.
pub fn router(store: Arc<SessionStore>, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session).delete(delete_session))
        .route("/sessions/{id}/judgments", put(put_judgment))
        .route("/sessions/{id}/analysis", get(get_analysis))
        .with_state(store);
    match ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir).append_index_html_on_directories(true)),
        None => api.fallback(fallback),
    }
}

/// Binds `config.addr` and serves until the process is stopped.
pub async fn serve(config: ServiceConfig) -> std::io::Result<()> {
    let store = match &config.state_dir {
        Some(dir) => SessionStore::persistent(dir)?,
        None => SessionStore::in_memory(),
    };
    let app = router(Arc::new(store), config.ui_dir.clone());
    let listener = tokio::net::TcpListener::bind(config.addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app).await
}
