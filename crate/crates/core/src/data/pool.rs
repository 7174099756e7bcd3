use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::codec::{parse, Task, TaskSchema};

use super::DataError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolItem {
    pub input: String,
    pub target: String,
}

/// A named single-task dataset: input texts and gold target strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetPool {
    pub name: String,
    pub schema: TaskSchema,
    pub items: Vec<PoolItem>,
}

impl DatasetPool {
    pub fn new(name: impl Into<String>, schema: TaskSchema, items: Vec<PoolItem>) -> Result<Self, DataError> {
        let pool = Self {
            name: name.into(),
            schema,
            items,
        };
        pool.validate()?;
        Ok(pool)
    }

    pub fn task(&self) -> Task {
        self.schema.task
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Non-empty and every target parses under the pool schema.
    pub fn validate(&self) -> Result<(), DataError> {
        if self.items.is_empty() {
            return Err(DataError::EmptyPool(self.name.clone()));
        }
        for (index, item) in self.items.iter().enumerate() {
            if parse(&item.target, &self.schema, false).is_failed() {
                return Err(DataError::BadTarget {
                    pool: self.name.clone(),
                    index,
                });
            }
        }
        Ok(())
    }

    /// Reads `{input, target}` objects, one per line.
    pub fn read(name: impl Into<String>, schema: TaskSchema, reader: impl BufRead) -> Result<Self, DataError> {
        let name = name.into();
        let mut items = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let item = serde_json::from_str(&line).map_err(|e| DataError::BadLine {
                source_name: name.clone(),
                line: i + 1,
                message: e.to_string(),
            })?;
            items.push(item);
        }
        Self::new(name, schema, items)
    }
}

/// Where a mixed item came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub pool: String,
    pub task: Task,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedItem {
    pub input: String,
    pub target: String,
    pub provenance: Provenance,
}

pub fn write_items(items: &[MixedItem], mut writer: impl Write) -> std::io::Result<()> {
    for item in items {
        serde_json::to_writer(&mut writer, item)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()
}
