//! HTTP facade over `farpoint-core` for the interactive explorer.
//!
//! Routes:
//! - `GET /api/point?face&x&y[&orbit=n]`
//! - `GET /api/curve_j?samples=n`
//! - `GET /api/limit_set`
//! - `GET /healthz`
//!
//! Anything else is looked up in the optional static directory.

pub mod num;
pub mod routes;
pub mod schema;

pub use routes::{router, serve, serve_on};
pub use schema::{ApiError, ErrorKind, SCHEMA_VERSION};
