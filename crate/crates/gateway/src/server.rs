//! HTTP API over a generator and an authoring workspace.
//!
//! Visitor sessions live in memory under opaque ids. Requests on one
//! session queue behind each other; requests on different sessions run
//! concurrently. Every generation works on the knowledge base snapshot
//! that was current when it started, so a commit never changes a
//! description half way through.

use std::collections::{BTreeMap, HashMap};
use std::path::Path as FsPath;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, patch, post, put};
use axum::{Json, Router};
use exhibit_scribe::authoring::{self, Edit, Op, Outcome, PreviewRequest, Role, Workspace};
use exhibit_scribe::kb::{bundle, KnowledgeBase};
use exhibit_scribe::lexicon::{generate_forms, noun_for_entity, Register};
use exhibit_scribe::{Description, Diagnostic, Error, Generator, PackSet, SessionState};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::net::TcpListener;
use tower_http::services::ServeDir;

use crate::config::GatewayConfig;
use crate::session::{Prefs, Visit};

pub const TOKEN_HEADER: &str = "x-author-token";

pub struct AppState {
    generator: RwLock<Arc<Generator>>,
    workspace: Mutex<Workspace>,
    sessions: Mutex<HashMap<String, Arc<tokio::sync::Mutex<Visit>>>>,
    next_session: AtomicU64,
    tokens: BTreeMap<String, Role>,
    config: exhibit_scribe::Config,
}

pub type Shared = Arc<AppState>;

impl AppState {
    pub fn new(kb: KnowledgeBase, packs: PackSet, config: &GatewayConfig) -> Shared {
        let generator = Generator::new(kb.clone(), packs.clone(), config.generation.clone());
        Arc::new(AppState {
            generator: RwLock::new(Arc::new(generator)),
            workspace: Mutex::new(Workspace::new(kb, packs)),
            sessions: Mutex::new(HashMap::new()),
            next_session: AtomicU64::new(1),
            tokens: config.tokens.clone(),
            config: config.generation.clone(),
        })
    }

    /// The generator for the current snapshot.
    pub fn generator(&self) -> Arc<Generator> {
        Arc::clone(&self.generator.read().expect("generator lock"))
    }

    fn publish(&self, workspace: &Workspace) {
        let kb = (*workspace.snapshot()).clone();
        let next = Generator::new(kb, workspace.packs().clone(), self.config.clone());
        *self.generator.write().expect("generator lock") = Arc::new(next);
    }

    fn visit(&self, id: &str) -> Result<Arc<tokio::sync::Mutex<Visit>>, ApiError> {
        self.sessions
            .lock()
            .expect("session table")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("unknown session `{id}`")))
    }

    fn role(&self, headers: &HeaderMap) -> Result<Role, ApiError> {
        let token = headers
            .get(TOKEN_HEADER)
            .and_then(|v| v.to_str().ok())
            .ok_or_else(|| ApiError::new(StatusCode::UNAUTHORIZED, format!("missing {TOKEN_HEADER} header")))?;
        self.tokens
            .get(token)
            .copied()
            .ok_or_else(|| ApiError::new(StatusCode::UNAUTHORIZED, "unknown author token"))
    }

    /// Role check, commit and publish, under the single writer lock.
    fn commit(&self, headers: &HeaderMap, edit: &Edit) -> Result<Outcome, ApiError> {
        let role = self.role(headers)?;
        let mut workspace = self.workspace.lock().expect("workspace lock");
        let outcome = workspace.apply(role, edit)?;
        self.publish(&workspace);
        tracing::info!(op = %edit.op.name(), target = %edit.target, role = role.as_str(), "committed edit");
        Ok(outcome)
    }
}

/// Error response: `{error, diagnostics}`.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
    diagnostics: Vec<Diagnostic>,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
            diagnostics: Vec::new(),
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::UnknownEntity(_) | Error::UnknownFact(_) => StatusCode::NOT_FOUND,
            Error::EntityNotYetDescribed(_) => StatusCode::CONFLICT,
            Error::PermissionDenied { .. } => StatusCode::FORBIDDEN,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        let diagnostics = match &e {
            Error::Rejected(d) => d.clone(),
            other => vec![Diagnostic::from_error("request", other)],
        };
        ApiError {
            status,
            message: e.to_string(),
            diagnostics,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": self.message, "diagnostics": self.diagnostics });
        (self.status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

pub fn router(state: Shared, static_dir: Option<&FsPath>) -> Router {
    let api = Router::new()
        .route("/api/meta", get(meta))
        .route("/api/exhibits", get(exhibits))
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}", get(get_session).patch(patch_session))
        .route("/api/sessions/{id}/describe/{entity}", post(describe))
        .route("/api/sessions/{id}/say-more/{entity}", post(say_more))
        .route("/api/edits", post(post_edit))
        .route("/api/undo", post(undo))
        .route("/api/kb", get(get_kb))
        .route("/api/diagnostics", get(get_diagnostics))
        .route("/api/preview", post(preview))
        .route("/api/preview-field/{field}", get(preview_field))
        .route("/api/morph", post(morph))
        .route("/api/types", post(add_type))
        .route(
            "/api/types/{name}",
            patch(|s: State<Shared>, h: HeaderMap, Path(t): Path<String>, Json(p): Json<Value>| {
                edit_at(s, h, Op::RenameType, t, p)
            })
            .delete(|s: State<Shared>, h: HeaderMap, Path(t): Path<String>| edit_at(s, h, Op::RemoveType, t, Value::Null)),
        )
        .route(
            "/api/types/{name}/fields",
            post(|s: State<Shared>, h: HeaderMap, Path(t): Path<String>, Json(p): Json<Value>| {
                edit_at(s, h, Op::AddField, t, p)
            }),
        )
        .route(
            "/api/types/{name}/nouns",
            post(|s: State<Shared>, h: HeaderMap, Path(t): Path<String>, Json(p): Json<Value>| {
                edit_at(s, h, Op::AttachNoun, t, p)
            }),
        )
        .route(
            "/api/schemas/{name}",
            put(|s: State<Shared>, h: HeaderMap, Path(t): Path<String>, Json(p): Json<Value>| {
                edit_at(s, h, Op::SetSchema, t, p)
            }),
        )
        .route(
            "/api/fields/{name}",
            put(|s: State<Shared>, h: HeaderMap, Path(t): Path<String>, Json(p): Json<Value>| {
                edit_at(s, h, Op::ModifyField, t, p)
            })
            .patch(|s: State<Shared>, h: HeaderMap, Path(t): Path<String>, Json(p): Json<Value>| {
                edit_at(s, h, Op::RenameField, t, p)
            }),
        )
        .route(
            "/api/fields/{name}/templates",
            post(|s: State<Shared>, h: HeaderMap, Path(t): Path<String>, Json(p): Json<Value>| {
                edit_at(s, h, Op::AddTemplate, t, p)
            })
            .delete(|s: State<Shared>, h: HeaderMap, Path(t): Path<String>, Query(q): Query<LangQuery>| {
                edit_at(s, h, Op::RemoveTemplates, t, json!({ "language": q.lang.unwrap_or_default() }))
            }),
        )
        .route(
            "/api/verbs/{sense}",
            put(|s: State<Shared>, h: HeaderMap, Path(t): Path<String>, Json(p): Json<Value>| {
                edit_at(s, h, Op::UpsertVerb, t, p)
            }),
        )
        .route(
            "/api/adjectives/{sense}",
            put(|s: State<Shared>, h: HeaderMap, Path(t): Path<String>, Json(p): Json<Value>| {
                edit_at(s, h, Op::UpsertAdjective, t, p)
            }),
        )
        .route(
            "/api/user-types/{name}",
            put(|s: State<Shared>, h: HeaderMap, Path(t): Path<String>, Json(p): Json<Value>| {
                edit_at(s, h, Op::SetUserType, t, p)
            }),
        )
        .route("/api/entities", post(add_entity))
        .route(
            "/api/entities/{id}",
            put(|s: State<Shared>, h: HeaderMap, Path(t): Path<String>, Json(p): Json<Value>| {
                edit_at(s, h, Op::UpdateEntity, t, p)
            })
            .delete(|s: State<Shared>, h: HeaderMap, Path(t): Path<String>| edit_at(s, h, Op::RemoveEntity, t, Value::Null)),
        )
        .route(
            "/api/entities/{id}/facts",
            post(|s: State<Shared>, h: HeaderMap, Path(t): Path<String>, Json(p): Json<Value>| {
                edit_at(s, h, Op::AssertFact, t, p)
            }),
        )
        .route(
            "/api/facts/{id}",
            patch(|s: State<Shared>, h: HeaderMap, Path(t): Path<String>, Json(p): Json<Value>| {
                edit_at(s, h, Op::SetFactValue, t, p)
            })
            .delete(|s: State<Shared>, h: HeaderMap, Path(t): Path<String>| edit_at(s, h, Op::RetractFact, t, Value::Null)),
        )
        .route(
            "/api/facts/{id}/scores",
            put(|s: State<Shared>, h: HeaderMap, Path(t): Path<String>, Json(p): Json<Value>| {
                edit_at(s, h, Op::SetScores, t, p)
            }),
        )
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Binds `port` and serves until Ctrl-C.
pub async fn serve(state: Shared, config: &GatewayConfig) -> anyhow::Result<()> {
    let app = router(state, config.static_dir.as_deref());
    let listener = TcpListener::bind(("0.0.0.0", config.port)).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

#[derive(Deserialize)]
struct LangQuery {
    lang: Option<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Meta {
    languages: Vec<String>,
    user_types: Vec<String>,
}

async fn meta(State(s): State<Shared>) -> Json<Meta> {
    let g = s.generator();
    Json(Meta {
        languages: g.kb.languages.clone(),
        user_types: g.kb.user_types.iter().map(|u| u.name.clone()).collect(),
    })
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct ExhibitSummary {
    pub entity_id: String,
    pub type_name: String,
    pub display_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thumbnail_ref: Option<String>,
}

/// The proper name, or else the capitalized noun for the entity.
fn display_name(kb: &KnowledgeBase, id: &str, language: &str) -> String {
    let Ok(e) = kb.entity(id) else {
        return id.to_string();
    };
    if let Some(name) = e.name.get(language) {
        return name.clone();
    }
    match noun_for_entity(e, language, Register::Adult, kb) {
        Ok(noun) => {
            let mut chars = noun.lemma.chars();
            chars
                .next()
                .map(|c| c.to_uppercase().chain(chars).collect())
                .unwrap_or_default()
        }
        Err(_) => id.to_string(),
    }
}

async fn exhibits(State(s): State<Shared>, Query(q): Query<LangQuery>) -> ApiResult<Vec<ExhibitSummary>> {
    let g = s.generator();
    let kb = &g.kb;
    let language = match q.lang {
        Some(l) if kb.language_enabled(&l) => l,
        Some(l) => return Err(Error::LanguageNotEnabled(l).into()),
        None => kb.languages.first().cloned().unwrap_or_default(),
    };
    let out = exhibit_scribe::demo::exhibit_ids(kb)
        .into_iter()
        .map(|id| {
            let e = kb.entity(&id).expect("listed entity exists");
            ExhibitSummary {
                type_name: e.type_name.clone(),
                display_name: display_name(kb, &id, &language),
                thumbnail_ref: e.thumbnail.clone(),
                entity_id: id,
            }
        })
        .collect();
    Ok(Json(out))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct NewSession {
    user_type: String,
    language: String,
    #[serde(default)]
    max_facts: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct SessionView {
    pub session_id: String,
    pub user_type: String,
    pub language: String,
    pub max_facts: usize,
    /// Described entities, oldest first.
    pub history: Vec<String>,
}

impl SessionView {
    fn of(state: &SessionState) -> Self {
        SessionView {
            session_id: state.session_id.clone(),
            user_type: state.user_type.clone(),
            language: state.language.clone(),
            max_facts: state.max_facts,
            history: state.history.iter().map(|r| r.entity_id.clone()).collect(),
        }
    }
}

async fn create_session(State(s): State<Shared>, Json(body): Json<NewSession>) -> Result<(StatusCode, Json<SessionView>), ApiError> {
    let g = s.generator();
    let id = format!("s{}", s.next_session.fetch_add(1, Ordering::Relaxed));
    let visit = Visit::new(&g, &id, &body.user_type, &body.language, body.max_facts)?;
    let view = SessionView::of(&visit.state);
    s.sessions
        .lock()
        .expect("session table")
        .insert(id, Arc::new(tokio::sync::Mutex::new(visit)));
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_session(State(s): State<Shared>, Path(id): Path<String>) -> ApiResult<SessionView> {
    let visit = s.visit(&id)?;
    let v = visit.lock().await;
    Ok(Json(SessionView::of(&v.state)))
}

async fn patch_session(State(s): State<Shared>, Path(id): Path<String>, Json(prefs): Json<Prefs>) -> ApiResult<SessionView> {
    let visit = s.visit(&id)?;
    let mut v = visit.lock().await;
    v.update(&s.generator(), &prefs)?;
    Ok(Json(SessionView::of(&v.state)))
}

async fn describe(State(s): State<Shared>, Path((id, entity)): Path<(String, String)>) -> ApiResult<Description> {
    generate(&s, &id, &entity, false).await
}

async fn say_more(State(s): State<Shared>, Path((id, entity)): Path<(String, String)>) -> ApiResult<Description> {
    generate(&s, &id, &entity, true).await
}

async fn generate(s: &AppState, id: &str, entity: &str, more: bool) -> ApiResult<Description> {
    let visit = s.visit(id)?;
    // queued behind earlier requests on this session, in arrival order
    let mut v = visit.lock().await;
    let g = s.generator();
    g.kb.entity(entity)?;
    let d = if more {
        g.say_more(&mut v.state, entity)?
    } else {
        g.describe(&mut v.state, entity)?
    };
    Ok(Json(d))
}

async fn edit_at(State(s): State<Shared>, headers: HeaderMap, op: Op, target: String, payload: Value) -> ApiResult<Outcome> {
    Ok(Json(s.commit(&headers, &Edit { op, target, payload })?))
}

async fn post_edit(State(s): State<Shared>, headers: HeaderMap, Json(edit): Json<Edit>) -> ApiResult<Outcome> {
    Ok(Json(s.commit(&headers, &edit)?))
}

/// Splits the resource key out of a creation body.
fn keyed(mut body: Value, key: &str) -> Result<(String, Value), ApiError> {
    let id = body
        .as_object_mut()
        .and_then(|m| m.remove(key))
        .and_then(|v| v.as_str().map(str::to_string))
        .ok_or_else(|| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, format!("body needs a string `{key}`")))?;
    Ok((id, body))
}

async fn add_type(s: State<Shared>, headers: HeaderMap, Json(body): Json<Value>) -> ApiResult<Outcome> {
    let (name, payload) = keyed(body, "name")?;
    edit_at(s, headers, Op::AddType, name, payload).await
}

async fn add_entity(s: State<Shared>, headers: HeaderMap, Json(body): Json<Value>) -> ApiResult<Outcome> {
    let (id, payload) = keyed(body, "id")?;
    edit_at(s, headers, Op::AddEntity, id, payload).await
}

#[derive(Serialize, Deserialize)]
struct Undone {
    undone: bool,
}

/// Rolls back the last commit, whoever made it, so it needs the wider role.
async fn undo(State(s): State<Shared>, headers: HeaderMap) -> ApiResult<Undone> {
    let role = s.role(&headers)?;
    if role != Role::DomainAuthor {
        return Err(Error::PermissionDenied {
            role: role.as_str().to_string(),
            op: "undo".into(),
        }
        .into());
    }
    let mut workspace = s.workspace.lock().expect("workspace lock");
    let undone = workspace.undo();
    if undone {
        s.publish(&workspace);
    }
    Ok(Json(Undone { undone }))
}

async fn get_kb(State(s): State<Shared>) -> Response {
    let g = s.generator();
    ([(header::CONTENT_TYPE, "application/json")], bundle::to_json(&g.kb)).into_response()
}

async fn get_diagnostics(State(s): State<Shared>) -> Json<Vec<Diagnostic>> {
    let g = s.generator();
    Json(authoring::diagnostics(&g.kb, &g.packs))
}

async fn preview(State(s): State<Shared>, Json(request): Json<PreviewRequest>) -> Result<Json<authoring::Preview>, ApiError> {
    let g = s.generator();
    let p = authoring::preview_description(&g, &request);
    if p.description.is_none() {
        return Err(ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            message: format!("no preview for `{}`", request.entity_id),
            diagnostics: p.diagnostics,
        });
    }
    Ok(Json(p))
}

#[derive(Serialize, Deserialize)]
struct Phrase {
    text: String,
}

async fn preview_field(State(s): State<Shared>, Path(field): Path<String>, Query(q): Query<LangQuery>) -> ApiResult<Phrase> {
    let g = s.generator();
    let language = q.lang.unwrap_or_else(|| g.kb.languages.first().cloned().unwrap_or_default());
    let text = g.preview_phrase(&field, &language)?;
    Ok(Json(Phrase { text }))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct MorphRequest {
    language: String,
    lemma: String,
    paradigm_class: String,
}

#[derive(Serialize, Deserialize)]
struct Forms {
    forms: BTreeMap<String, String>,
}

async fn morph(State(s): State<Shared>, Json(r): Json<MorphRequest>) -> ApiResult<Forms> {
    let g = s.generator();
    let pack = g.packs.get(&r.language)?;
    Ok(Json(Forms {
        forms: generate_forms(&r.lemma, &r.paradigm_class, pack)?,
    }))
}
