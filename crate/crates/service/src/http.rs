//! JSON API over the engine.
//!
//! | Method | Path | Result |
//! |--------|------|--------|
//! | POST   | `/datasets?name=..&types=col:numerical,..` (CSV body) | stored dataset manifest |
//! | GET    | `/datasets/{id}/summary` | manifest |
//! | GET    | `/datasets/{id}/columns/{name}/distribution?subset=0,4,7` | distribution summary |
//! | POST   | `/sessions` `{dataset, outcome, mode?, config?}` | `{id}` |
//! | POST   | `/sessions/{id}/filters` `{constraint}` | snapshot |
//! | DELETE | `/sessions/{id}/filters/{column}` | snapshot |
//! | GET    | `/sessions/{id}/snapshot?feature=..` | snapshot |
//! | GET    | `/sessions/{id}/log` | session event log |
//!
//! Every body is canonical JSON. Errors carry `{code, message}` where `code`
//! is the engine error name.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::Router;
use counterfact::{
    column_distribution, Dataset, FilterConstraint, LoadOptions, Mode, Session, SimilarityConfig,
    TypeHint,
};
use serde::{Deserialize, Serialize};

use crate::error::{ServiceError, ServiceResult};
use crate::store::Store;

pub fn canonical_response<T: Serialize>(status: StatusCode, value: &T) -> Response {
    match counterfact::to_canonical_json(value) {
        Ok(body) => (status, [(header::CONTENT_TYPE, "application/json")], body).into_response(),
        Err(e) => (StatusCode::INTERNAL_SERVER_ERROR, e.to_string()).into_response(),
    }
}

struct SessionEntry {
    dataset_id: String,
    session: Session,
}

pub struct AppState {
    store: Store,
    datasets: Mutex<HashMap<String, Arc<Dataset>>>,
    sessions: Mutex<HashMap<String, Arc<Mutex<SessionEntry>>>>,
}

impl AppState {
    pub fn new(store: Store) -> Self {
        AppState {
            store,
            datasets: Mutex::new(HashMap::new()),
            sessions: Mutex::new(HashMap::new()),
        }
    }

    fn dataset(&self, id: &str) -> ServiceResult<Arc<Dataset>> {
        if let Some(ds) = self.datasets.lock().unwrap().get(id) {
            return Ok(ds.clone());
        }
        let (_, ds) = self.store.load_dataset(id)?;
        let ds = Arc::new(ds);
        self.datasets
            .lock()
            .unwrap()
            .insert(id.to_owned(), ds.clone());
        Ok(ds)
    }

    /// Looks a session up in memory, replaying its stored log if this
    /// process has not seen it yet.
    fn session(&self, id: &str) -> ServiceResult<Arc<Mutex<SessionEntry>>> {
        if let Some(entry) = self.sessions.lock().unwrap().get(id) {
            return Ok(entry.clone());
        }
        let log = self.store.session_log(id)?;
        let ds = self.dataset(&log.dataset)?;
        let session = Session::replay(ds, &log)?;
        let entry = Arc::new(Mutex::new(SessionEntry {
            dataset_id: log.dataset,
            session,
        }));
        Ok(self
            .sessions
            .lock()
            .unwrap()
            .entry(id.to_owned())
            .or_insert(entry)
            .clone())
    }
}

type Shared = Arc<AppState>;

pub fn router(store: Store) -> Router {
    Router::new()
        .route("/datasets", post(upload_dataset))
        .route("/datasets/{id}/summary", get(dataset_summary))
        .route("/datasets/{id}/columns/{name}/distribution", get(distribution))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}/filters", post(push_filter))
        .route("/sessions/{id}/filters/{column}", delete(pop_filter))
        .route("/sessions/{id}/snapshot", get(snapshot))
        .route("/sessions/{id}/log", get(session_log))
        .with_state(Arc::new(AppState::new(store)))
}

fn parse_types(text: &str) -> ServiceResult<LoadOptions> {
    let mut options = LoadOptions::default();
    for item in text.split(',').filter(|s| !s.is_empty()) {
        let (col, kind) = item
            .rsplit_once(':')
            .ok_or_else(|| ServiceError::BadRequest(format!("bad type override `{item}`")))?;
        let hint: TypeHint = kind.parse().map_err(ServiceError::BadRequest)?;
        options.overrides.insert(col.to_owned(), hint);
    }
    Ok(options)
}

fn parse_json<T: for<'de> Deserialize<'de>>(body: &[u8]) -> ServiceResult<T> {
    serde_json::from_slice(body).map_err(|e| ServiceError::BadRequest(e.to_string()))
}

async fn upload_dataset(
    State(state): State<Shared>,
    Query(query): Query<HashMap<String, String>>,
    body: Bytes,
) -> ServiceResult<Response> {
    let name = query.get("name").map_or("upload", String::as_str);
    let options = parse_types(query.get("types").map_or("", String::as_str))?;
    let (manifest, ds) = state.store.put_dataset(name, &body, options)?;
    state
        .datasets
        .lock()
        .unwrap()
        .insert(manifest.id.clone(), Arc::new(ds));
    Ok(canonical_response(StatusCode::CREATED, &manifest))
}

async fn dataset_summary(
    State(state): State<Shared>,
    Path(id): Path<String>,
) -> ServiceResult<Response> {
    Ok(canonical_response(StatusCode::OK, &state.store.manifest(&id)?))
}

async fn distribution(
    State(state): State<Shared>,
    Path((id, name)): Path<(String, String)>,
    Query(query): Query<HashMap<String, String>>,
) -> ServiceResult<Response> {
    let ds = state.dataset(&id)?;
    let subset = query
        .get("subset")
        .map(|s| {
            s.split(',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| ServiceError::BadRequest(format!("bad row index `{t}`")))
                })
                .collect::<ServiceResult<Vec<_>>>()
        })
        .transpose()?;
    let summary = column_distribution(&ds, &name, subset.as_deref())?;
    Ok(canonical_response(StatusCode::OK, &summary))
}

#[derive(Deserialize)]
struct CreateSession {
    dataset: String,
    outcome: String,
    #[serde(default = "default_mode")]
    mode: Mode,
    #[serde(default)]
    config: SimilarityConfig,
}

fn default_mode() -> Mode {
    Mode::Counterfactual
}

#[derive(Serialize)]
struct Created {
    id: String,
}

async fn create_session(State(state): State<Shared>, body: Bytes) -> ServiceResult<Response> {
    let req: CreateSession = parse_json(&body)?;
    let ds = state.dataset(&req.dataset)?;
    let session = Session::create(ds, req.outcome, req.mode, req.config)?;
    let id = uuid::Uuid::new_v4().simple().to_string();
    state.store.save_session(&id, &session.log(&req.dataset))?;
    state.sessions.lock().unwrap().insert(
        id.clone(),
        Arc::new(Mutex::new(SessionEntry {
            dataset_id: req.dataset,
            session,
        })),
    );
    Ok(canonical_response(StatusCode::CREATED, &Created { id }))
}

#[derive(Deserialize)]
struct PushFilter {
    constraint: String,
}

async fn push_filter(
    State(state): State<Shared>,
    Path(id): Path<String>,
    body: Bytes,
) -> ServiceResult<Response> {
    let req: PushFilter = parse_json(&body)?;
    let constraint: FilterConstraint = req.constraint.parse()?;
    let entry = state.session(&id)?;
    let mut entry = entry.lock().unwrap();
    let snapshot = entry.session.push_filter(constraint)?;
    state
        .store
        .save_session(&id, &entry.session.log(&entry.dataset_id))?;
    Ok(canonical_response(StatusCode::OK, &snapshot))
}

async fn pop_filter(
    State(state): State<Shared>,
    Path((id, column)): Path<(String, String)>,
) -> ServiceResult<Response> {
    let entry = state.session(&id)?;
    let mut entry = entry.lock().unwrap();
    let snapshot = entry.session.pop_filter(&column)?;
    state
        .store
        .save_session(&id, &entry.session.log(&entry.dataset_id))?;
    Ok(canonical_response(StatusCode::OK, &snapshot))
}

async fn snapshot(
    State(state): State<Shared>,
    Path(id): Path<String>,
    Query(query): Query<HashMap<String, String>>,
) -> ServiceResult<Response> {
    let entry = state.session(&id)?;
    let entry = entry.lock().unwrap();
    let snapshot = entry
        .session
        .snapshot(query.get("feature").map(String::as_str))?;
    Ok(canonical_response(StatusCode::OK, &snapshot))
}

async fn session_log(
    State(state): State<Shared>,
    Path(id): Path<String>,
) -> ServiceResult<Response> {
    let entry = state.session(&id)?;
    let entry = entry.lock().unwrap();
    Ok(canonical_response(
        StatusCode::OK,
        &entry.session.log(&entry.dataset_id),
    ))
}
