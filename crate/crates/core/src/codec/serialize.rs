use serde::{Deserialize, Serialize};

use super::output::{EeOutput, NerOutput, ReOutput, StructuredOutput, TriggerGroup};
use super::parse::{ARG_SEP, PAIR_SEP, ROLE_SEP, VALUE_SEP};
use super::schema::TaskSchema;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SerializeMode {
    /// Every schema label, empty string when absent.
    Full,
    /// Only labels with at least one value.
    Concise,
}

/// Canonical single-line serialization, keys in schema order.
///
/// Output looks like `{"used for": "surface, algorithm"}`.
pub fn serialize(output: &StructuredOutput, schema: &TaskSchema, mode: SerializeMode) -> String {
    match output {
        StructuredOutput::Ner(o) => write_object(schema, mode, |label| ner_value(o, label)),
        StructuredOutput::Re(o) => write_object(schema, mode, |label| re_value(o, label)),
        StructuredOutput::Ee(o) => write_object(schema, mode, |label| ee_value(o, label)),
    }
}

fn write_object(
    schema: &TaskSchema,
    mode: SerializeMode,
    value_of: impl Fn(&str) -> String,
) -> String {
    let mut out = String::from("{");
    let mut first = true;
    for label in &schema.labels {
        let value = value_of(label);
        if value.is_empty() && mode == SerializeMode::Concise {
            continue;
        }
        if !first {
            out.push_str(", ");
        }
        first = false;
        out.push_str(&json_string(label));
        out.push_str(": ");
        out.push_str(&json_string(&value));
    }
    out.push('}');
    out
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("serializing a str cannot fail")
}

fn ner_value(o: &NerOutput, label: &str) -> String {
    o.slots
        .get(label)
        .map(|mentions| mentions.join(VALUE_SEP))
        .unwrap_or_default()
}

fn re_value(o: &ReOutput, label: &str) -> String {
    o.relations
        .get(label)
        .map(|pairs| {
            pairs
                .iter()
                .map(|(h, t)| format!("{h}{PAIR_SEP}{t}"))
                .collect::<Vec<_>>()
                .join(VALUE_SEP)
        })
        .unwrap_or_default()
}

fn ee_value(o: &EeOutput, label: &str) -> String {
    o.events
        .get(label)
        .map(|groups| {
            groups
                .iter()
                .map(group_string)
                .collect::<Vec<_>>()
                .join(VALUE_SEP)
        })
        .unwrap_or_default()
}

fn group_string(group: &TriggerGroup) -> String {
    if group.args.is_empty() {
        return group.trigger.clone();
    }
    let args = group
        .args
        .iter()
        .map(|(role, arg)| format!("{role}{ROLE_SEP}{arg}"))
        .collect::<Vec<_>>()
        .join(ARG_SEP);
    format!("{}{ROLE_SEP}{args}", group.trigger)
}

/// Drops whitespace outside JSON string literals.
///
/// Used to compare serialized objects against pretty-printed references.
pub fn compact_json(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_string = false;
    let mut escaped = false;
    for c in text.trim().chars() {
        if in_string {
            out.push(c);
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_string = false;
            }
        } else if c == '"' {
            in_string = true;
            out.push(c);
        } else if !c.is_whitespace() {
            out.push(c);
        }
    }
    out
}
