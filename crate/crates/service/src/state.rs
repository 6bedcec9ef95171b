use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use uuid::Uuid;

use adm_core::formats::parse_model;
use adm_core::session::{AlternativeOption, ExcludedAlternative, HistoryEntry};
use adm_core::{
    build_model, conforms, DecisionSession, DesignDocument, IssueId, Model, SessionError,
    SessionStatus,
};

use crate::ApiError;

pub const DEFAULT_IDLE_TIMEOUT: Duration = Duration::from_secs(60 * 60);

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ModelSummary {
    pub id: String,
    pub name: String,
    pub issue_count: usize,
    pub alternative_count: usize,
}

/// A model file in the model directory that could not be loaded.
#[derive(Debug, Clone)]
pub struct LoadWarning {
    pub path: PathBuf,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IssueOptions {
    pub issue: IssueId,
    pub alternatives: Vec<AlternativeOption>,
    pub excluded: Vec<ExcludedAlternative>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionResource {
    pub id: String,
    pub model_id: String,
    pub created_at: u64,
    pub choices: DesignDocument,
    pub pending: Vec<IssueId>,
    pub allowed_alternatives: Vec<IssueOptions>,
    pub status: SessionStatus,
    /// Server-side conformity verdict of the current choices.
    pub conforms: bool,
    pub history: Vec<HistoryEntry>,
}

struct SessionEntry {
    session: DecisionSession,
    model_id: String,
    created_at: u64,
    last_used: Instant,
}

impl SessionEntry {
    fn resource(&self, id: &str) -> SessionResource {
        let s = &self.session;
        let allowed_alternatives = s
            .pending()
            .iter()
            .map(|issue| IssueOptions {
                issue: issue.clone(),
                alternatives: s.allowed_alternatives(issue.as_str()).unwrap_or_default(),
                excluded: s.excluded_alternatives(issue.as_str()).unwrap_or_default(),
            })
            .collect();
        SessionResource {
            id: id.to_owned(),
            model_id: self.model_id.clone(),
            created_at: self.created_at,
            choices: DesignDocument::from_design(s.model(), s.choices()),
            pending: s.pending().to_vec(),
            allowed_alternatives,
            status: s.status(),
            conforms: conforms(s.choices(), s.model()).conforms,
            history: s.history().to_vec(),
        }
    }
}

struct Inner {
    /// Append-only.
    models: RwLock<Vec<(String, Arc<Model>)>>,
    sessions: Mutex<HashMap<String, Arc<Mutex<SessionEntry>>>>,
    idle_timeout: Duration,
}

/// Shared server state: the model store and the live sessions.
#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

impl Default for AppState {
    fn default() -> Self {
        AppState::new(DEFAULT_IDLE_TIMEOUT)
    }
}

fn slug(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c.to_ascii_lowercase()
            } else {
                '-'
            }
        })
        .collect();
    let s = s.trim_matches('-').to_owned();
    if s.is_empty() {
        "model".to_owned()
    } else {
        s
    }
}

impl AppState {
    pub fn new(idle_timeout: Duration) -> Self {
        AppState {
            inner: Arc::new(Inner {
                models: RwLock::new(Vec::new()),
                sessions: Mutex::new(HashMap::new()),
                idle_timeout,
            }),
        }
    }

    /// Loads every `*.json` file directly inside `dir`, in file-name order.
    /// A file `rapp.adm.json` gets the id `rapp`. Files that fail to parse
    /// or validate are skipped and reported.
    pub fn load_dir(&self, dir: &Path) -> io::Result<Vec<LoadWarning>> {
        let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        let mut warnings = Vec::new();
        for path in paths {
            let loaded = fs::read_to_string(&path)
                .map_err(|e| e.to_string())
                .and_then(|text| parse_model(&text).map_err(|e| e.to_string()))
                .and_then(|doc| {
                    build_model(&doc).map_err(|r| {
                        r.violations
                            .iter()
                            .map(|v| v.message.clone())
                            .collect::<Vec<_>>()
                            .join("; ")
                    })
                });
            match loaded {
                Ok(model) => {
                    let stem = path.file_name().and_then(|n| n.to_str()).unwrap_or("model");
                    let stem = stem.trim_end_matches(".json").trim_end_matches(".adm");
                    self.add_model(Some(stem), model);
                }
                Err(reason) => warnings.push(LoadWarning { path, reason }),
            }
        }
        Ok(warnings)
    }

    /// Adds a model under `preferred` (or its name's slug), suffixing `-2`,
    /// `-3`, ... on collision. Returns the id.
    pub fn add_model(&self, preferred: Option<&str>, model: Model) -> String {
        let base = slug(preferred.unwrap_or(model.name()));
        let mut models = self.inner.models.write().expect("model store lock");
        let taken = |id: &str| models.iter().any(|(existing, _)| existing == id);
        let mut id = base.clone();
        let mut n = 2;
        while taken(&id) {
            id = format!("{base}-{n}");
            n += 1;
        }
        models.push((id.clone(), Arc::new(model)));
        id
    }

    pub fn model(&self, id: &str) -> Result<Arc<Model>, ApiError> {
        self.inner
            .models
            .read()
            .expect("model store lock")
            .iter()
            .find(|(existing, _)| existing == id)
            .map(|(_, m)| m.clone())
            .ok_or_else(|| ApiError::unknown_model(id))
    }

    pub fn model_summaries(&self) -> Vec<ModelSummary> {
        self.inner
            .models
            .read()
            .expect("model store lock")
            .iter()
            .map(|(id, m)| ModelSummary {
                id: id.clone(),
                name: m.name().to_owned(),
                issue_count: m.issues().len(),
                alternative_count: m.alternatives().len(),
            })
            .collect()
    }

    fn sweep(&self, sessions: &mut HashMap<String, Arc<Mutex<SessionEntry>>>) {
        let timeout = self.inner.idle_timeout;
        sessions.retain(|_, entry| {
            // A session busy in another request is in use, not idle.
            entry
                .try_lock()
                .map_or(true, |e| e.last_used.elapsed() < timeout)
        });
    }

    pub fn create_session(&self, model_id: &str) -> Result<SessionResource, ApiError> {
        let model = self.model(model_id)?;
        let session = DecisionSession::new(model)?;
        let created_at = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0);
        let entry = SessionEntry {
            session,
            model_id: model_id.to_owned(),
            created_at,
            last_used: Instant::now(),
        };
        let id = Uuid::new_v4().simple().to_string();
        let resource = entry.resource(&id);
        let mut sessions = self.inner.sessions.lock().expect("session table lock");
        self.sweep(&mut sessions);
        sessions.insert(id, Arc::new(Mutex::new(entry)));
        Ok(resource)
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<SessionEntry>>, ApiError> {
        let mut sessions = self.inner.sessions.lock().expect("session table lock");
        self.sweep(&mut sessions);
        sessions
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::unknown_session(id))
    }

    pub fn read_session(&self, id: &str) -> Result<SessionResource, ApiError> {
        let entry = self.session(id)?;
        let mut entry = entry.lock().expect("session lock");
        entry.last_used = Instant::now();
        Ok(entry.resource(id))
    }

    /// Applies `op` under the session's lock, so mutations of one session
    /// are serialized.
    pub fn update_session(
        &self,
        id: &str,
        op: impl FnOnce(&mut DecisionSession) -> Result<(), SessionError>,
    ) -> Result<SessionResource, ApiError> {
        let entry = self.session(id)?;
        let mut entry = entry.lock().expect("session lock");
        entry.last_used = Instant::now();
        op(&mut entry.session)?;
        Ok(entry.resource(id))
    }

    pub fn session_count(&self) -> usize {
        let mut sessions = self.inner.sessions.lock().expect("session table lock");
        self.sweep(&mut sessions);
        sessions.len()
    }
}
