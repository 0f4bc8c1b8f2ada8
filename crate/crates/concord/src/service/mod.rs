//! HTTP/JSON service for interactive judgment elicitation.
//!
//! | method | path | body | response |
//! |---|---|---|---|
//! | `POST` | `/sessions` | `{labels}` | session |
//! | `GET` | `/sessions/{id}` | | session |
//! | `PUT` | `/sessions/{id}/judgments` | `{i, j, value}` | session |
//! | `GET` | `/sessions/{id}/analysis` | | analysis |
//! | `DELETE` | `/sessions/{id}` | | `204` |
//!
//! Indices are one-based. Errors are `{code, message}` with status 400,
//! 404 or 500.

mod http;
mod store;

pub use http::{router, serve, ServiceConfig, DEFAULT_ADDR};
pub use store::{
    analyze, AnalysisResponse, Judgment, ServiceError, Session, SessionStore, TriadEntry, TriadSummary,
    MAX_STIMULI, MIN_STIMULI, TOP_TRIADS,
};
