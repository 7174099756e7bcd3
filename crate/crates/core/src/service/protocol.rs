use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::codec::{Task, TaskSchema};
use crate::grpo::{group_advantages, score_candidates, DEFAULT_EPSILON};
use crate::reward::{RewardBreakdown, SfrConfig};

use super::registry::SchemaRegistry;

/// A registry id or an inline schema object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SchemaRef {
    Id(String),
    Inline(TaskSchema),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRequest {
    pub id: String,
    pub task: Task,
    pub gold: String,
    pub candidates: Vec<String>,
    pub schema: SchemaRef,
    /// Partial `SfrConfig` object applied over the server config.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<Value>,
    /// Include per-candidate breakdowns in the response.
    #[serde(default)]
    pub breakdowns: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorKind {
    #[serde(rename = "malformed_request")]
    MalformedRequest,
    #[serde(rename = "invalid_request")]
    InvalidRequest,
    #[serde(rename = "unknown_schema")]
    UnknownSchema,
    #[serde(rename = "invalid_config")]
    InvalidConfig,
    GoldUnparseable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub kind: ErrorKind,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreResponse {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rewards: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub advantages: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breakdowns: Option<Vec<RewardBreakdown>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorBody>,
}

impl ScoreResponse {
    fn error(id: impl Into<String>, kind: ErrorKind, message: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            rewards: None,
            advantages: None,
            breakdowns: None,
            error: Some(ErrorBody {
                kind,
                message: message.into(),
            }),
        }
    }
}

/// Stateless scorer behind the server: immutable schemas and config.
#[derive(Debug, Clone)]
pub struct RewardService {
    registry: SchemaRegistry,
    config: SfrConfig,
}

impl RewardService {
    pub fn new(registry: SchemaRegistry, config: SfrConfig) -> Self {
        Self { registry, config }
    }

    pub fn registry(&self) -> &SchemaRegistry {
        &self.registry
    }

    pub fn handle(&self, req: &ScoreRequest) -> ScoreResponse {
        let schema = match &req.schema {
            SchemaRef::Id(id) => match self.registry.get(id) {
                Some(s) => s,
                None => {
                    return ScoreResponse::error(&req.id, ErrorKind::UnknownSchema, format!("unknown schema `{id}`"))
                }
            },
            SchemaRef::Inline(s) => {
                if let Err(e) = s.validate() {
                    return ScoreResponse::error(&req.id, ErrorKind::InvalidRequest, format!("invalid schema: {e}"));
                }
                s
            }
        };
        if schema.task != req.task {
            return ScoreResponse::error(
                &req.id,
                ErrorKind::InvalidRequest,
                format!("request task {} does not match schema task {}", req.task, schema.task),
            );
        }
        if req.candidates.is_empty() {
            return ScoreResponse::error(&req.id, ErrorKind::InvalidRequest, "candidates must be non-empty");
        }
        let config = match &req.config {
            Some(overrides) => match self.config.with_overrides(overrides) {
                Ok(c) => c,
                Err(e) => return ScoreResponse::error(&req.id, ErrorKind::InvalidConfig, e.to_string()),
            },
            None => self.config,
        };
        match score_candidates(&req.gold, &req.candidates, schema, &config) {
            Ok(breakdowns) => {
                let rewards: Vec<f64> = breakdowns.iter().map(|b| b.total).collect();
                let advantages = group_advantages(&rewards, DEFAULT_EPSILON);
                ScoreResponse {
                    id: req.id.clone(),
                    rewards: Some(rewards),
                    advantages: Some(advantages),
                    breakdowns: req.breakdowns.then_some(breakdowns),
                    error: None,
                }
            }
            Err(e) => ScoreResponse::error(&req.id, ErrorKind::GoldUnparseable, e.to_string()),
        }
    }

    /// Never fails: malformed lines become error responses, keeping the id when one can be read.
    pub fn handle_line(&self, line: &str) -> ScoreResponse {
        match serde_json::from_str::<ScoreRequest>(line) {
            Ok(req) => self.handle(&req),
            Err(e) => {
                let id = serde_json::from_str::<Value>(line)
                    .ok()
                    .and_then(|v| v.get("id").and_then(Value::as_str).map(str::to_string))
                    .unwrap_or_default();
                ScoreResponse::error(id, ErrorKind::MalformedRequest, e.to_string())
            }
        }
    }
}
