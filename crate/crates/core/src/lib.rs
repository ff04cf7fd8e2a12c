//! Mining security-related sentences from Stack Overflow data dumps.

pub mod classify;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod ingest;
pub mod io;
pub mod pipeline;
pub mod sampling;
pub mod tagset;
pub mod topics;
pub mod trends;

pub use error::{Error, Result};
