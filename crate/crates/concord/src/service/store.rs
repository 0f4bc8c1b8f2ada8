//! Sessions of pairwise judgments and their analysis.
//!
//! Stimulus indices are one-based here, as on the wire.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, MutexGuard, RwLock};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use uuid::Uuid;

use concord_core::{approximate, check_consistency, extract_weights, PcMatrix, CONSISTENCY_TOL};

pub const MIN_STIMULI: usize = 2;
pub const MAX_STIMULI: usize = 50;

/// Number of triads returned by an analysis.
pub const TOP_TRIADS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ServiceError {
    #[error("{0}")]
    BadRequest(String),
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Internal(String),
}

impl ServiceError {
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::BadRequest(_) => "bad_request",
            ServiceError::NotFound(_) => "not_found",
            ServiceError::Internal(_) => "internal",
        }
    }
}

fn not_found(id: &str) -> ServiceError {
    ServiceError::NotFound(format!("no session `{id}`"))
}

/// One stored judgment `m_ij` with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Judgment {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "SessionRepr", try_from = "SessionRepr")]
pub struct Session {
    pub id: String,
    pub labels: Vec<String>,
    /// Upper-triangle judgments keyed by `(i, j)`, `i < j`.
    pub judgments: BTreeMap<(usize, usize), f64>,
    pub created: DateTime<Utc>,
    pub updated: DateTime<Utc>,
    pub version: u64,
}

#[derive(Serialize, Deserialize)]
struct SessionRepr {
    id: String,
    labels: Vec<String>,
    judgments: Vec<Judgment>,
    created: DateTime<Utc>,
    updated: DateTime<Utc>,
    version: u64,
}

impl From<Session> for SessionRepr {
    fn from(s: Session) -> Self {
        SessionRepr {
            id: s.id,
            labels: s.labels,
            judgments: s
                .judgments
                .into_iter()
                .map(|((i, j), value)| Judgment { i, j, value })
                .collect(),
            created: s.created,
            updated: s.updated,
            version: s.version,
        }
    }
}

impl TryFrom<SessionRepr> for Session {
    type Error = String;

    fn try_from(r: SessionRepr) -> Result<Self, String> {
        let n = r.labels.len();
        let mut judgments = BTreeMap::new();
        for Judgment { i, j, value } in r.judgments {
            if !(1 <= i && i < j && j <= n && value.is_finite() && value > 0.0) {
                return Err(format!("invalid stored judgment ({i}, {j}) = {value}"));
            }
            judgments.insert((i, j), value);
        }
        Ok(Session {
            id: r.id,
            labels: r.labels,
            judgments,
            created: r.created,
            updated: r.updated,
            version: r.version,
        })
    }
}

impl Session {
    pub fn new(labels: Vec<String>) -> Result<Self, ServiceError> {
        let n = labels.len();
        if !(MIN_STIMULI..=MAX_STIMULI).contains(&n) {
            return Err(ServiceError::BadRequest(format!(
                "a session needs between {MIN_STIMULI} and {MAX_STIMULI} labels, got {n}"
            )));
        }
        for (idx, label) in labels.iter().enumerate() {
            if label.trim().is_empty() {
                return Err(ServiceError::BadRequest(format!("label {} is empty", idx + 1)));
            }
            if labels[..idx].contains(label) {
                return Err(ServiceError::BadRequest(format!("duplicate label `{label}`")));
            }
        }
        let now = Utc::now();
        Ok(Session {
            id: Uuid::new_v4().simple().to_string(),
            labels,
            judgments: BTreeMap::new(),
            created: now,
            updated: now,
            version: 1,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Records `m_ij = value`, stored as `m_ji = 1/value` when `i > j`.
    pub fn put_judgment(&mut self, i: usize, j: usize, value: f64) -> Result<(), ServiceError> {
        let n = self.len();
        if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
            return Err(ServiceError::BadRequest(format!(
                "indices ({i}, {j}) out of range 1..={n}"
            )));
        }
        if i == j {
            return Err(ServiceError::BadRequest(format!(
                "diagonal judgment ({i}, {j}) is fixed at 1"
            )));
        }
        if !(value.is_finite() && value > 0.0) {
            return Err(ServiceError::BadRequest(format!(
                "judgment value {value} must be a positive finite number"
            )));
        }
        let (key, stored) = if i < j {
            ((i, j), value)
        } else {
            ((j, i), 1.0 / value)
        };
        self.judgments.insert(key, stored);
        self.version += 1;
        self.updated = Utc::now();
        Ok(())
    }

    /// The full reciprocal matrix; pairs without a judgment default to 1.
    pub fn completed_matrix(&self) -> PcMatrix {
        let n = self.len();
        let mut rows = vec![vec![1.0; n]; n];
        for (&(i, j), &v) in &self.judgments {
            rows[i - 1][j - 1] = v;
            rows[j - 1][i - 1] = 1.0 / v;
        }
        PcMatrix::from_rows(&rows).expect("stored judgments are positive")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriadEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub inconsistency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriadSummary {
    /// Worst first, at most [`TOP_TRIADS`] entries.
    pub triads: Vec<TriadEntry>,
    pub global: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisResponse {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
    pub consistent: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub residual_norm: f64,
    pub triads: TriadSummary,
    pub version: u64,
}

/// Analyses a session snapshot: completion, approximation, weights and
/// the worst triads of the entered judgments.
pub fn analyze(session: &Session) -> Result<AnalysisResponse, ServiceError> {
    let matrix = session.completed_matrix();
    let internal = |e: concord_core::Error| ServiceError::Internal(e.to_string());
    let projection = approximate(&matrix).map_err(internal)?;
    let weights = extract_weights(&projection.consistent).map_err(internal)?;
    let report = check_consistency(&matrix, CONSISTENCY_TOL);
    Ok(AnalysisResponse {
        labels: session.labels.clone(),
        matrix: matrix.to_rows(),
        consistent: projection.consistent.to_rows(),
        weights: weights.values,
        residual_norm: projection.residual_norm,
        triads: TriadSummary {
            triads: report
                .top(TOP_TRIADS)
                .iter()
                .map(|t| TriadEntry {
                    i: t.i + 1,
                    j: t.j + 1,
                    k: t.k + 1,
                    inconsistency: t.inconsistency,
                })
                .collect(),
            global: report.global,
        },
        version: session.version,
    })
}

/// In-memory sessions, optionally mirrored to one JSON file per session.
#[derive(Debug, Default)]
pub struct SessionStore {
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    state_dir: Option<PathBuf>,
}

fn lock(session: &Mutex<Session>) -> MutexGuard<'_, Session> {
    session.lock().unwrap_or_else(|e| e.into_inner())
}

impl SessionStore {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// A store persisting to `dir`, loading any snapshots already there.
    pub fn persistent(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        let mut sessions = HashMap::new();
        for entry in fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "json") {
                let text = fs::read_to_string(&path)?;
                let session: Session = serde_json::from_str(&text).map_err(|e| {
                    std::io::Error::new(
                        std::io::ErrorKind::InvalidData,
                        format!("{}: {e}", path.display()),
                    )
                })?;
                sessions.insert(session.id.clone(), Arc::new(Mutex::new(session)));
            }
        }
        Ok(SessionStore {
            sessions: RwLock::new(sessions),
            state_dir: Some(dir),
        })
    }

    pub fn state_dir(&self) -> Option<&Path> {
        self.state_dir.as_deref()
    }

    fn snapshot_path(&self, id: &str) -> Option<PathBuf> {
        self.state_dir.as_ref().map(|d| d.join(format!("{id}.json")))
    }

    fn persist(&self, session: &Session) -> Result<(), ServiceError> {
        let Some(path) = self.snapshot_path(&session.id) else {
            return Ok(());
        };
        let io = |e: std::io::Error| ServiceError::Internal(format!("persisting session: {e}"));
        let tmp = path.with_extension("json.tmp");
        let text = serde_json::to_string_pretty(session).expect("serializable");
        fs::write(&tmp, text).map_err(io)?;
        fs::rename(&tmp, &path).map_err(io)
    }

    fn find(&self, id: &str) -> Result<Arc<Mutex<Session>>, ServiceError> {
        self.sessions
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .get(id)
            .cloned()
            .ok_or_else(|| not_found(id))
    }

    pub fn create(&self, labels: Vec<String>) -> Result<Session, ServiceError> {
        let session = Session::new(labels)?;
        self.persist(&session)?;
        self.sessions
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .insert(session.id.clone(), Arc::new(Mutex::new(session.clone())));
        Ok(session)
    }

    pub fn get(&self, id: &str) -> Result<Session, ServiceError> {
        let handle = self.find(id)?;
        let session = lock(&handle).clone();
        Ok(session)
    }

    /// Applies one judgment under the session's lock and returns the new state.
    pub fn put_judgment(&self, id: &str, i: usize, j: usize, value: f64) -> Result<Session, ServiceError> {
        let handle = self.find(id)?;
        let mut session = lock(&handle);
        let mut next = session.clone();
        next.put_judgment(i, j, value)?;
        self.persist(&next)?;
        *session = next;
        Ok(session.clone())
    }

    /// Analysis of a consistent snapshot of the session.
    pub fn analysis(&self, id: &str) -> Result<AnalysisResponse, ServiceError> {
        let snapshot = self.get(id)?;
        analyze(&snapshot)
    }

    pub fn delete(&self, id: &str) -> Result<(), ServiceError> {
        let removed = self
            .sessions
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .remove(id)
            .ok_or_else(|| not_found(id))?;
        // wait for in-flight mutations before dropping the snapshot
        let _guard = lock(&removed);
        if let Some(path) = self.snapshot_path(id) {
            match fs::remove_file(&path) {
                Ok(()) => {}
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
                Err(e) => return Err(ServiceError::Internal(format!("removing session: {e}"))),
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.sessions.read().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn create_session() {
        let s = Session::new(labels(&["A", "B", "C"])).unwrap();
        assert_eq!(s.version, 1);
        assert!(s.judgments.is_empty());
        assert_eq!(s.completed_matrix(), PcMatrix::ones(3).unwrap());
    }

    #[test]
    fn label_validation() {
        assert!(matches!(Session::new(labels(&["A", "A"])), Err(ServiceError::BadRequest(_))));
        assert!(matches!(Session::new(labels(&["A", " "])), Err(ServiceError::BadRequest(_))));
        assert!(matches!(Session::new(labels(&["A"])), Err(ServiceError::BadRequest(_))));
        let fifty: Vec<String> = (0..50).map(|i| format!("s{i}")).collect();
        assert!(Session::new(fifty).is_ok());
        let fifty_one: Vec<String> = (0..51).map(|i| format!("s{i}")).collect();
        assert!(matches!(Session::new(fifty_one), Err(ServiceError::BadRequest(_))));
    }

    #[test]
    fn lower_triangle_judgment_is_inverted() {
        let mut s = Session::new(labels(&["A", "B"])).unwrap();
        s.put_judgment(2, 1, 0.5).unwrap();
        assert_eq!(s.judgments.get(&(1, 2)), Some(&2.0));
        assert_eq!(s.version, 2);
    }

    #[test]
    fn judgment_validation() {
        let mut s = Session::new(labels(&["A", "B"])).unwrap();
        assert!(matches!(s.put_judgment(1, 1, 3.0), Err(ServiceError::BadRequest(_))));
        assert!(matches!(s.put_judgment(1, 2, 0.0), Err(ServiceError::BadRequest(_))));
        assert!(matches!(s.put_judgment(1, 2, -1.0), Err(ServiceError::BadRequest(_))));
        assert!(matches!(s.put_judgment(0, 2, 1.0), Err(ServiceError::BadRequest(_))));
        assert!(matches!(s.put_judgment(1, 3, 1.0), Err(ServiceError::BadRequest(_))));
        assert_eq!(s.version, 1);
    }

    #[test]
    fn last_write_wins() {
        let store = SessionStore::in_memory();
        let s = store.create(labels(&["A", "B", "C"])).unwrap();
        store.put_judgment(&s.id, 1, 3, 4.0).unwrap();
        let s2 = store.put_judgment(&s.id, 1, 3, 6.0).unwrap();
        assert_eq!(s2.version, s.version + 2);
        assert_eq!(s2.judgments.get(&(1, 3)), Some(&6.0));
    }

    #[test]
    fn empty_session_analysis() {
        let s = Session::new(labels(&["A", "B", "C", "D"])).unwrap();
        let a = analyze(&s).unwrap();
        assert!(a.consistent.iter().flatten().all(|&v| v == 1.0));
        assert!(a.weights.iter().all(|&w| (w - 0.25).abs() < 1e-15));
        assert_eq!(a.triads.global, 0.0);
        assert_eq!(a.version, 1);
    }

    #[test]
    fn unknown_session() {
        let store = SessionStore::in_memory();
        assert!(matches!(store.get("nope"), Err(ServiceError::NotFound(_))));
        assert!(matches!(store.put_judgment("nope", 1, 2, 2.0), Err(ServiceError::NotFound(_))));
        assert!(matches!(store.analysis("nope"), Err(ServiceError::NotFound(_))));
        assert!(matches!(store.delete("nope"), Err(ServiceError::NotFound(_))));
    }

    #[test]
    fn session_json_uses_judgment_list() {
        let mut s = Session::new(labels(&["A", "B", "C"])).unwrap();
        s.put_judgment(3, 1, 0.25).unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["judgments"], serde_json::json!([{"i": 1, "j": 3, "value": 4.0}]));
        let back: Session = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
    }
}
