//! HTTP/JSON sessions for playing the domination game against the engine.
//!
//! The engine plays Dominator with the phased strategy, or Staller with a
//! chosen policy. Endpoints:
//!
//! * `POST /games` creates a session and returns `{id, view}`;
//! * `GET /games/{id}` returns the current view;
//! * `POST /games/{id}/moves` plays `{vertex}` for the human, then the engine;
//! * `GET /games/{id}/hint` returns an optimal move for the human.
//!
//! Unknown sessions give 404, moves out of turn or after the end give 409,
//! illegal vertices and bad graphs give 422. Idle sessions expire.

mod session;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use domgame_core::graph::{parse_edge_list, random_caterpillar, random_forest, random_tree};
use domgame_core::{Forest, Player, StallerPolicy};
use serde::{Deserialize, Serialize};
use serde_json::json;
use uuid::Uuid;

pub use session::{BoundsView, EngineConfig, Hint, LedgerView, Session, SessionError, VertexView, View};

/// Largest order accepted; the hint solver is exact.
pub const DEFAULT_MAX_VERTICES: usize = 24;
pub const DEFAULT_TTL: Duration = Duration::from_secs(30 * 60);

/// Shared session store.
#[derive(Clone)]
pub struct AppState {
    sessions: Arc<RwLock<HashMap<Uuid, Arc<Mutex<Session>>>>>,
    ttl: Duration,
    max_vertices: usize,
}

impl Default for AppState {
    fn default() -> Self {
        AppState::new(DEFAULT_TTL, DEFAULT_MAX_VERTICES)
    }
}

impl AppState {
    pub fn new(ttl: Duration, max_vertices: usize) -> Self {
        AppState { sessions: Arc::default(), ttl, max_vertices }
    }

    pub fn session_count(&self) -> usize {
        self.sessions.read().unwrap().len()
    }

    /// Drops sessions idle for longer than the ttl.
    pub fn purge_expired(&self) {
        let now = Instant::now();
        self.sessions.write().unwrap().retain(|_, s| {
            // a locked session is in use, so not idle
            s.try_lock().map_or(true, |s| now.duration_since(s.last_active) <= self.ttl)
        });
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.purge_expired();
        let id = Uuid::parse_str(id).map_err(|_| ApiError::NotFound)?;
        self.sessions.read().unwrap().get(&id).cloned().ok_or(ApiError::NotFound)
    }
}

#[derive(Debug)]
pub enum ApiError {
    NotFound,
    Conflict(String),
    Unprocessable(String),
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        match e {
            SessionError::NotYourTurn | SessionError::GameOver => ApiError::Conflict(e.to_string()),
            SessionError::IllegalVertex(_) | SessionError::BadInput(_) => ApiError::Unprocessable(e.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, msg) = match self {
            ApiError::NotFound => (StatusCode::NOT_FOUND, "no such game".to_string()),
            ApiError::Conflict(m) => (StatusCode::CONFLICT, m),
            ApiError::Unprocessable(m) => (StatusCode::UNPROCESSABLE_ENTITY, m),
        };
        (status, Json(json!({ "error": msg }))).into_response()
    }
}

/// A generated forest instead of an explicit edge list.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeneratorSpec {
    Path { n: usize },
    Star { leaves: usize },
    Tree { n: usize, #[serde(default)] seed: u64 },
    Forest { n: usize, components: usize, #[serde(default)] seed: u64 },
    Caterpillar { n: usize, #[serde(default)] seed: u64 },
}

impl GeneratorSpec {
    fn build(&self) -> Result<Forest, String> {
        let n = match *self {
            GeneratorSpec::Star { leaves } => leaves + 1,
            GeneratorSpec::Path { n }
            | GeneratorSpec::Tree { n, .. }
            | GeneratorSpec::Forest { n, .. }
            | GeneratorSpec::Caterpillar { n, .. } => n,
        };
        if n < 2 {
            return Err("a forest without isolated vertices needs at least 2 vertices".into());
        }
        Ok(match *self {
            GeneratorSpec::Path { n } => Forest::path(n),
            GeneratorSpec::Star { leaves } => Forest::star(leaves),
            GeneratorSpec::Tree { n, seed } => random_tree(n, seed),
            GeneratorSpec::Forest { n, components, seed } => {
                random_forest(n, components, seed).map_err(|e| e.to_string())?
            }
            GeneratorSpec::Caterpillar { n, seed } => random_caterpillar(n, seed),
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct CreateGame {
    /// Edge list text, one `u v` pair per line.
    #[serde(default)]
    pub edges: Option<String>,
    #[serde(default)]
    pub generator: Option<GeneratorSpec>,
    pub human: Player,
    #[serde(default = "dominator")]
    pub start: Player,
    #[serde(default = "optimal")]
    pub staller_policy: StallerPolicy,
    #[serde(default)]
    pub seed: u64,
}

fn dominator() -> Player {
    Player::Dominator
}

fn optimal() -> StallerPolicy {
    StallerPolicy::Optimal
}

#[derive(Debug, Clone, Deserialize)]
pub struct MoveRequest {
    pub vertex: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Created {
    pub id: Uuid,
    pub view: View,
}

async fn create(State(app): State<AppState>, Json(req): Json<CreateGame>) -> Result<Json<Created>, ApiError> {
    app.purge_expired();
    let forest = match (&req.edges, &req.generator) {
        (Some(text), None) => parse_edge_list(text).map_err(|e| ApiError::Unprocessable(e.to_string()))?.value,
        (None, Some(g)) => g.build().map_err(ApiError::Unprocessable)?,
        _ => return Err(ApiError::Unprocessable("give exactly one of edges or generator".into())),
    };
    if forest.graph().n() > app.max_vertices {
        return Err(ApiError::Unprocessable(format!(
            "{} vertices exceeds the limit of {}",
            forest.graph().n(),
            app.max_vertices
        )));
    }
    let config = EngineConfig { policy: req.staller_policy, seed: req.seed };
    let session = Session::new(forest, req.human, req.start, config)?;
    let view = session.view();
    let id = Uuid::new_v4();
    app.sessions.write().unwrap().insert(id, Arc::new(Mutex::new(session)));
    Ok(Json(Created { id, view }))
}

async fn show(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<View>, ApiError> {
    let s = app.get(&id)?;
    let mut s = s.lock().unwrap();
    s.last_active = Instant::now();
    Ok(Json(s.view()))
}

async fn play(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Json(req): Json<MoveRequest>,
) -> Result<Json<View>, ApiError> {
    let s = app.get(&id)?;
    let mut s = s.lock().unwrap();
    s.human_move(req.vertex)?;
    Ok(Json(s.view()))
}

async fn hint(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<Hint>, ApiError> {
    let s = app.get(&id)?;
    let mut s = s.lock().unwrap();
    Ok(Json(s.hint()?))
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/games", post(create))
        .route("/games/{id}", get(show))
        .route("/games/{id}/moves", post(play))
        .route("/games/{id}/hint", get(hint))
        .with_state(state)
}

/// Serves until the process is stopped, purging idle sessions once a minute.
pub async fn serve(addr: SocketAddr, state: AppState) -> std::io::Result<()> {
    let purger = state.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            purger.purge_expired();
        }
    });
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state)).await
}
