use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::schema::{Task, TaskSchema};

/// NER output: slot label to mentions, in first-appearance order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NerOutput {
    pub slots: IndexMap<String, Vec<String>>,
}

/// RE output: relation type to `(head, tail)` pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReOutput {
    pub relations: IndexMap<String, Vec<(String, String)>>,
}

/// A trigger word and the role-argument pairs attached to it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriggerGroup {
    pub trigger: String,
    pub args: Vec<(String, String)>,
}

impl TriggerGroup {
    pub fn new<T, R, A>(trigger: T, args: impl IntoIterator<Item = (R, A)>) -> Self
    where
        T: Into<String>,
        R: Into<String>,
        A: Into<String>,
    {
        let mut group = Self {
            trigger: trigger.into(),
            args: args
                .into_iter()
                .map(|(r, a)| (r.into(), a.into()))
                .collect(),
        };
        dedup_in_place(&mut group.args);
        group
    }
}

/// EE output: event type to trigger groups.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EeOutput {
    pub events: IndexMap<String, Vec<TriggerGroup>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "lowercase")]
pub enum StructuredOutput {
    Ner(NerOutput),
    Re(ReOutput),
    Ee(EeOutput),
}

impl StructuredOutput {
    /// The empty structure for a schema: every label present with no values.
    pub fn empty(schema: &TaskSchema) -> Self {
        match schema.task {
            Task::Ner => StructuredOutput::Ner(NerOutput::empty(schema)),
            Task::Re => StructuredOutput::Re(ReOutput::empty(schema)),
            Task::Ee => StructuredOutput::Ee(EeOutput::empty(schema)),
        }
    }

    pub fn task(&self) -> Task {
        match self {
            StructuredOutput::Ner(_) => Task::Ner,
            StructuredOutput::Re(_) => Task::Re,
            StructuredOutput::Ee(_) => Task::Ee,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            StructuredOutput::Ner(o) => o.slots.values().all(Vec::is_empty),
            StructuredOutput::Re(o) => o.relations.values().all(Vec::is_empty),
            StructuredOutput::Ee(o) => o.events.values().all(Vec::is_empty),
        }
    }
}

impl From<NerOutput> for StructuredOutput {
    fn from(o: NerOutput) -> Self {
        StructuredOutput::Ner(o)
    }
}

impl From<ReOutput> for StructuredOutput {
    fn from(o: ReOutput) -> Self {
        StructuredOutput::Re(o)
    }
}

impl From<EeOutput> for StructuredOutput {
    fn from(o: EeOutput) -> Self {
        StructuredOutput::Ee(o)
    }
}

impl NerOutput {
    pub fn empty(schema: &TaskSchema) -> Self {
        Self {
            slots: schema
                .labels
                .iter()
                .map(|l| (l.clone(), Vec::new()))
                .collect(),
        }
    }

    /// Appends a mention unless already present in that slot.
    pub fn push(&mut self, label: &str, mention: impl Into<String>) {
        let mention = mention.into();
        let slot = self.slots.entry(label.to_string()).or_default();
        if !slot.contains(&mention) {
            slot.push(mention);
        }
    }
}

impl ReOutput {
    pub fn empty(schema: &TaskSchema) -> Self {
        Self {
            relations: schema
                .labels
                .iter()
                .map(|l| (l.clone(), Vec::new()))
                .collect(),
        }
    }

    pub fn push(&mut self, relation: &str, head: impl Into<String>, tail: impl Into<String>) {
        let pair = (head.into(), tail.into());
        let pairs = self.relations.entry(relation.to_string()).or_default();
        if !pairs.contains(&pair) {
            pairs.push(pair);
        }
    }
}

impl EeOutput {
    pub fn empty(schema: &TaskSchema) -> Self {
        Self {
            events: schema
                .labels
                .iter()
                .map(|l| (l.clone(), Vec::new()))
                .collect(),
        }
    }

    pub fn push(&mut self, event_type: &str, group: TriggerGroup) {
        self.events
            .entry(event_type.to_string())
            .or_default()
            .push(group);
    }
}

/// Removes later duplicates, keeping first-appearance order.
pub(crate) fn dedup_in_place<T: PartialEq>(items: &mut Vec<T>) {
    let mut kept: Vec<T> = Vec::with_capacity(items.len());
    for item in items.drain(..) {
        if !kept.contains(&item) {
            kept.push(item);
        }
    }
    *items = kept;
}
