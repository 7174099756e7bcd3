//! Streaming reward server for external RL trainers.
//!
//! Wire protocol: UTF-8, one JSON object per line. Requests are
//! [`ScoreRequest`]s and each yields exactly one [`ScoreResponse`] carrying the
//! same id. Responses may arrive out of order.

mod protocol;
mod registry;
mod server;

pub use protocol::{ErrorBody, ErrorKind, RewardService, SchemaRef, ScoreRequest, ScoreResponse};
pub use registry::SchemaRegistry;
pub use server::{default_workers, serve_stdio, serve_stream, serve_tcp, ServeStats};
