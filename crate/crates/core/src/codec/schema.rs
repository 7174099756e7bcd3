use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Extraction task family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    #[serde(alias = "NER")]
    Ner,
    #[serde(alias = "RE")]
    Re,
    #[serde(alias = "EE")]
    Ee,
}

impl Task {
    pub fn as_str(self) -> &'static str {
        match self {
            Task::Ner => "ner",
            Task::Re => "re",
            Task::Ee => "ee",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = SchemaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ner" => Ok(Task::Ner),
            "re" => Ok(Task::Re),
            "ee" => Ok(Task::Ee),
            other => Err(SchemaError::UnknownTask(other.to_string())),
        }
    }
}

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("unknown task `{0}` (expected ner, re or ee)")]
    UnknownTask(String),
    #[error("schema has no labels")]
    NoLabels,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("duplicate role `{0}`")]
    DuplicateRole(String),
    #[error("roles are only allowed for ee schemas, got {0} roles for a {1} schema")]
    UnexpectedRoles(usize, Task),
    #[error("schema expects task {expected}, got {actual}")]
    TaskMismatch { expected: Task, actual: Task },
    #[error("failed to read schema {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid schema json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Label and role inventory that defines the output universe of one task instance.
///
/// For NER the labels are entity types (slots), for RE relation types and for
/// EE event types. Only EE schemas carry roles; role names may contain dots
/// (`Treatment.Drug`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskSchema {
    pub task: Task,
    pub labels: Vec<String>,
    #[serde(default)]
    pub roles: Vec<String>,
}

impl TaskSchema {
    pub fn new(task: Task, labels: Vec<String>, roles: Vec<String>) -> Result<Self, SchemaError> {
        let schema = Self {
            task,
            labels,
            roles,
        };
        schema.validate()?;
        Ok(schema)
    }

    pub fn ner<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self, SchemaError> {
        Self::new(Task::Ner, labels.into_iter().map(Into::into).collect(), vec![])
    }

    pub fn re<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self, SchemaError> {
        Self::new(Task::Re, labels.into_iter().map(Into::into).collect(), vec![])
    }

    pub fn ee<S: Into<String>, R: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        roles: impl IntoIterator<Item = R>,
    ) -> Result<Self, SchemaError> {
        Self::new(
            Task::Ee,
            labels.into_iter().map(Into::into).collect(),
            roles.into_iter().map(Into::into).collect(),
        )
    }

    pub fn validate(&self) -> Result<(), SchemaError> {
        if self.labels.is_empty() {
            return Err(SchemaError::NoLabels);
        }
        let mut seen = HashSet::new();
        for label in &self.labels {
            if !seen.insert(label.as_str()) {
                return Err(SchemaError::DuplicateLabel(label.clone()));
            }
        }
        if self.task != Task::Ee && !self.roles.is_empty() {
            return Err(SchemaError::UnexpectedRoles(self.roles.len(), self.task));
        }
        let mut seen = HashSet::new();
        for role in &self.roles {
            if !seen.insert(role.as_str()) {
                return Err(SchemaError::DuplicateRole(role.clone()));
            }
        }
        Ok(())
    }

    pub fn expect_task(&self, task: Task) -> Result<(), SchemaError> {
        if self.task == task {
            Ok(())
        } else {
            Err(SchemaError::TaskMismatch {
                expected: task,
                actual: self.task,
            })
        }
    }

    pub fn has_label(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }

    pub fn has_role(&self, role: &str) -> bool {
        self.roles.iter().any(|r| r == role)
    }

    pub fn from_json(text: &str) -> Result<Self, SchemaError> {
        let schema: TaskSchema = serde_json::from_str(text)?;
        schema.validate()?;
        Ok(schema)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SchemaError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| SchemaError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }
}
