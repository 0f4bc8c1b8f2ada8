//! Matrix documents, command line and HTTP service over [`concord_core`].
//!
//! The numerical engine lives in `concord-core` and is re-exported as
//! [`core`]. This crate adds the CSV/JSON matrix formats ([`io`]), the
//! `concord` command line ([`cli`]) and a session-based elicitation
//! service ([`service`]). See the `examples/` directory for one runnable
//! program per capability.

pub use concord_core as core;

pub mod cli;
pub mod io;
pub mod service;
