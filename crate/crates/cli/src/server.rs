//! HTTP service. Solves run on the blocking pool and hold permits of a
//! global worker budget for their duration; the session cache is the only
//! state shared between requests.

use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use polysolve::apollonius::SessionCache;
use polysolve::error::Error;
use polysolve::polynomial::parse_system;
use polysolve::solver::{solve_blackbox, SolverOptions};
use serde::de::DeserializeOwned;
use serde::Serialize;
use tokio::net::TcpListener;
use tokio::sync::Semaphore;

use crate::json::{versioned, ApolloniusRequest, ErrorResponse, SolveRequest, SolveResponse, VERSION};

#[derive(Clone, Debug)]
pub struct ServerConfig {
    /// Worker threads shared by all concurrent solves.
    pub workers: usize,
    pub session_capacity: usize,
    pub session_ttl: Duration,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self { workers: crate::worker_budget(), session_capacity: 1024, session_ttl: Duration::from_secs(600) }
    }
}

#[derive(Clone)]
struct AppState {
    cache: Arc<SessionCache>,
    budget: Arc<Semaphore>,
    workers: usize,
}

pub fn router(config: &ServerConfig) -> Router {
    let workers = config.workers.max(1);
    let state = AppState {
        cache: Arc::new(SessionCache::new(config.session_capacity, config.session_ttl)),
        budget: Arc::new(Semaphore::new(workers)),
        workers,
    };
    Router::new()
        .route("/api/health", get(health))
        .route("/api/solve", post(solve))
        .route("/api/apollonius", post(apollonius))
        .with_state(state)
}

pub async fn serve(listener: TcpListener, config: ServerConfig) -> std::io::Result<()> {
    axum::serve(listener, router(&config)).await
}

fn reply<T: Serialize>(status: StatusCode, body: T) -> Response {
    (status, Json(versioned(body))).into_response()
}

fn status_of(e: &Error) -> StatusCode {
    match e {
        _ if e.is_input_error() => StatusCode::BAD_REQUEST,
        Error::LoopFailure(_) | Error::SingularMatrix => StatusCode::INTERNAL_SERVER_ERROR,
        _ => StatusCode::UNPROCESSABLE_ENTITY,
    }
}

fn failure(e: &Error) -> Response {
    reply(status_of(e), ErrorResponse::from(e))
}

fn parse_body<T: DeserializeOwned>(body: &[u8]) -> Result<T, Response> {
    let req: T = serde_json::from_slice(body)
        .map_err(|e| reply(StatusCode::BAD_REQUEST, ErrorResponse::new("MalformedRequest", e.to_string())))?;
    Ok(req)
}

fn check_version(v: &Option<String>) -> Result<(), Response> {
    match v.as_deref() {
        None | Some(VERSION) => Ok(()),
        Some(other) => Err(reply(
            StatusCode::BAD_REQUEST,
            ErrorResponse::new("UnsupportedVersion", format!("unsupported version '{other}'")),
        )),
    }
}

/// Runs `f` on the blocking pool while holding `permits` of the budget.
async fn with_budget<T, F>(st: &AppState, permits: usize, f: F) -> Result<T, Response>
where
    T: Send + 'static,
    F: FnOnce() -> T + Send + 'static,
{
    let internal = |m: String| reply(StatusCode::INTERNAL_SERVER_ERROR, ErrorResponse::new("Internal", m));
    let permit = st
        .budget
        .clone()
        .acquire_many_owned(permits as u32)
        .await
        .map_err(|e| internal(e.to_string()))?;
    tokio::task::spawn_blocking(move || {
        let _permit = permit;
        f()
    })
    .await
    .map_err(|e| internal(e.to_string()))
}

async fn health(State(st): State<AppState>) -> Response {
    #[derive(Serialize)]
    struct Health {
        status: &'static str,
        workers: usize,
        sessions: usize,
    }
    reply(StatusCode::OK, Health { status: "ok", workers: st.workers, sessions: st.cache.len() })
}

async fn solve(State(st): State<AppState>, body: Bytes) -> Response {
    let req: SolveRequest = match parse_body(&body) {
        Ok(r) => r,
        Err(resp) => return resp,
    };
    if let Err(resp) = check_version(&req.version) {
        return resp;
    }
    let tasks = req.tasks.clamp(1, st.workers);
    let run = move || {
        let s = parse_system(&req.system)?;
        let opts = SolverOptions { tasks, precision: req.precision, seed: req.seed, ..SolverOptions::default() };
        solve_blackbox(&s, &opts).map(|r| SolveResponse::new(&r))
    };
    match with_budget(&st, tasks, run).await {
        Ok(Ok(r)) => reply(StatusCode::OK, r),
        Ok(Err(e)) => failure(&e),
        Err(resp) => resp,
    }
}

async fn apollonius(State(st): State<AppState>, body: Bytes) -> Response {
    let req: ApolloniusRequest = match parse_body(&body) {
        Ok(r) => r,
        Err(resp) => return resp,
    };
    if let Err(resp) = check_version(&req.version) {
        return resp;
    }
    let cache = st.cache.clone();
    let run = move || cache.solve(&req.input, req.session.as_deref());
    match with_budget(&st, 1, run).await {
        Ok(Ok(out)) => reply(StatusCode::OK, out),
        Ok(Err(e)) => failure(&e),
        Err(resp) => resp,
    }
}
