//! JSON-over-HTTP access to sessions under `/v1`.
//!
//! Sessions live in memory. Each is guarded by its own lock; by default a
//! request that finds its session locked gets `409 Conflict` instead of
//! waiting. Sessions idle for longer than the expiry are dropped.

use std::collections::HashMap;
use std::sync::{Arc, Mutex as StdMutex};
use std::time::{Duration, Instant};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};
use tokio::sync::{Mutex, MutexGuard};

use speccheck_core::accuracy::{check_program, AccuracyError, AccuracyOptions, DomainSpec, DEFAULT_WITNESS_CAP};
use speccheck_core::correction::CheckError;
use speccheck_core::eval::Budget;
use speccheck_core::lang::{Edit, EditKind};
use speccheck_core::session::{Session, SessionError, Settings};

/// What to do with a request for a session that is already in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BusyPolicy {
    Reject,
    Wait,
}

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub budget: Budget,
    pub idle_expiry: Duration,
    pub busy: BusyPolicy,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            budget: Budget::default(),
            idle_expiry: Duration::from_secs(24 * 60 * 60),
            busy: BusyPolicy::Reject,
        }
    }
}

struct Slot {
    session: Mutex<Session>,
    last_used: StdMutex<Instant>,
}

#[derive(Clone)]
pub struct AppState {
    sessions: Arc<StdMutex<HashMap<String, Arc<Slot>>>>,
    config: Arc<ServerConfig>,
}

impl AppState {
    pub fn new(config: ServerConfig) -> Self {
        AppState {
            sessions: Arc::default(),
            config: Arc::new(config),
        }
    }

    fn purge_expired(&self) {
        let now = Instant::now();
        let expiry = self.config.idle_expiry;
        self.sessions
            .lock()
            .expect("session table lock")
            .retain(|_, slot| now.duration_since(*slot.last_used.lock().expect("clock lock")) < expiry);
    }

    fn insert(&self, session: Session) -> String {
        let id = session.id().to_string();
        let slot = Slot {
            session: Mutex::new(session),
            last_used: StdMutex::new(Instant::now()),
        };
        self.sessions
            .lock()
            .expect("session table lock")
            .insert(id.clone(), Arc::new(slot));
        id
    }

    async fn with_session<T>(&self, id: &str, f: impl FnOnce(&mut Session) -> Result<T, ApiError>) -> Result<T, ApiError> {
        self.purge_expired();
        let slot = self
            .sessions
            .lock()
            .expect("session table lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("no session `{id}`")))?;
        *slot.last_used.lock().expect("clock lock") = Instant::now();
        let mut guard: MutexGuard<'_, Session> = match self.config.busy {
            BusyPolicy::Wait => slot.session.lock().await,
            BusyPolicy::Reject => slot
                .session
                .try_lock()
                .map_err(|_| ApiError::new(StatusCode::CONFLICT, "session is busy"))?,
        };
        f(&mut guard)
    }
}

pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            body: json!({ "error": message.into() }),
        }
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let e = match e {
            SessionError::Accuracy(a) => return a.into(),
            other => other,
        };
        let status = match &e {
            SessionError::Invalid(_) => StatusCode::UNPROCESSABLE_ENTITY,
            SessionError::Check(CheckError::QueryPending | CheckError::NoPendingQuery) => StatusCode::CONFLICT,
            SessionError::NoChoicePending => StatusCode::CONFLICT,
            SessionError::InvalidOption { .. } => StatusCode::BAD_REQUEST,
            SessionError::VersionMismatch { .. } | SessionError::Corrupt(_) => StatusCode::UNPROCESSABLE_ENTITY,
            SessionError::Check(CheckError::Eval(_)) | SessionError::Io { .. } | SessionError::Accuracy(_) => {
                StatusCode::INTERNAL_SERVER_ERROR
            }
        };
        let mut body = json!({ "error": e.to_string() });
        if let SessionError::Invalid(diagnostics) = &e {
            body["diagnostics"] = json!(diagnostics);
        }
        ApiError { status, body }
    }
}

impl From<AccuracyError> for ApiError {
    fn from(e: AccuracyError) -> Self {
        let status = if e.is_cap() {
            StatusCode::PAYLOAD_TOO_LARGE
        } else {
            StatusCode::UNPROCESSABLE_ENTITY
        };
        ApiError::new(status, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult = Result<Response, ApiError>;

fn ok(value: impl serde::Serialize) -> ApiResult {
    Ok(Json(json!(value)).into_response())
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/v1/sessions", post(create_session))
        .route("/v1/sessions/import", post(import_session))
        .route("/v1/sessions/{id}", get(get_session).delete(delete_session))
        .route("/v1/sessions/{id}/step", post(step))
        .route("/v1/sessions/{id}/oracle", post(oracle))
        .route("/v1/sessions/{id}/edit", post(edit))
        .route("/v1/sessions/{id}/choose", post(choose))
        .route("/v1/sessions/{id}/restart", post(restart))
        .route("/v1/sessions/{id}/accuracy", post(accuracy))
        .route("/v1/sessions/{id}/behaviors", get(behaviors))
        .route("/v1/sessions/{id}/log", get(log))
        .route("/v1/sessions/{id}/export", get(export))
        .with_state(state)
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct CreateRequest {
    source: String,
    #[serde(default)]
    step_budget: Option<u64>,
    #[serde(default)]
    depth_budget: Option<u32>,
}

async fn create_session(State(state): State<AppState>, Json(req): Json<CreateRequest>) -> ApiResult {
    state.purge_expired();
    let mut budget = state.config.budget;
    if let Some(n) = req.step_budget {
        budget.max_steps = n;
    }
    if let Some(n) = req.depth_budget {
        budget.max_depth = n;
    }
    let session = Session::create(
        &req.source,
        Settings {
            budget,
            domain: None,
        },
    )?;
    let body = json!({
        "id": session.id(),
        "specOnly": session.is_spec_only(),
        "behaviorCount": session.behavior_count(),
        "warnings": session.warnings(),
    });
    state.insert(session);
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

async fn import_session(State(state): State<AppState>, Json(saved): Json<Value>) -> ApiResult {
    let session = Session::from_json(&saved.to_string())?;
    let body = json!({ "id": session.id(), "state": session.state() });
    state.insert(session);
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult {
    ok(state.with_session(&id, |s| Ok(s.state())).await?)
}

async fn delete_session(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let removed = state.sessions.lock().expect("session table lock").remove(&id);
    match removed {
        Some(_) => Ok(StatusCode::NO_CONTENT.into_response()),
        None => Err(ApiError::new(StatusCode::NOT_FOUND, format!("no session `{id}`"))),
    }
}

async fn step(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult {
    ok(state.with_session(&id, |s| Ok(s.step()?)).await?)
}

#[derive(Deserialize)]
struct OracleRequest {
    answer: bool,
}

async fn oracle(State(state): State<AppState>, Path(id): Path<String>, Json(req): Json<OracleRequest>) -> ApiResult {
    ok(state.with_session(&id, |s| Ok(s.answer(req.answer)?)).await?)
}

#[derive(Deserialize)]
struct EditRequest {
    kind: EditKind,
    text: String,
}

async fn edit(State(state): State<AppState>, Path(id): Path<String>, Json(req): Json<EditRequest>) -> ApiResult {
    let outcome = state
        .with_session(&id, |s| Ok(s.apply_edit(Edit::new(req.kind, req.text))))
        .await?;
    let status = if outcome.applied {
        StatusCode::OK
    } else {
        StatusCode::UNPROCESSABLE_ENTITY
    };
    Ok((status, Json(json!(outcome))).into_response())
}

#[derive(Deserialize)]
struct ChooseRequest {
    option: usize,
}

async fn choose(State(state): State<AppState>, Path(id): Path<String>, Json(req): Json<ChooseRequest>) -> ApiResult {
    ok(state.with_session(&id, |s| Ok(s.choose(req.option)?)).await?)
}

async fn restart(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult {
    ok(state
        .with_session(&id, |s| {
            s.restart();
            Ok(s.state())
        })
        .await?)
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct AccuracyRequest {
    domain: DomainSpec,
    #[serde(default)]
    fail_fast: bool,
    #[serde(default)]
    witness_cap: Option<usize>,
}

/// Runs on a blocking worker against a snapshot of the program, so the
/// session stays usable while the domain is walked.
async fn accuracy(State(state): State<AppState>, Path(id): Path<String>, Json(req): Json<AccuracyRequest>) -> ApiResult {
    let (program, budget) = state
        .with_session(&id, |s| Ok((s.program().clone(), s.settings().budget)))
        .await?;
    let options = AccuracyOptions {
        witness_cap: req.witness_cap.unwrap_or(DEFAULT_WITNESS_CAP),
        fail_fast: req.fail_fast,
    };
    let report = tokio::task::spawn_blocking(move || check_program(&program, &req.domain, budget, options))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    ok(report)
}

async fn behaviors(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult {
    ok(state.with_session(&id, |s| Ok(s.evaluate_behaviors()?)).await?)
}

async fn log(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult {
    ok(state
        .with_session(&id, |s| Ok(json!({ "events": s.log() })))
        .await?)
}

async fn export(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let text = state.with_session(&id, |s| Ok(s.to_json())).await?;
    let value: Value = serde_json::from_str(&text).expect("saved sessions are JSON");
    ok(value)
}

/// Serves until the process is stopped.
pub async fn serve(addr: std::net::SocketAddr, config: ServerConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(AppState::new(config))).await
}
