//! Parsers for the single-line JSON formats produced by extraction models.
//!
//! Every value in the top-level object is a string. Multiple values are
//! joined with `" | "`; an RE pair is `head, tail`; an EE trigger group is
//! `TRIGGER: ROLE: argument; ROLE: argument`. Parsing never panics and never
//! returns an error: a generation with no recoverable object yields a
//! [`ParseStatus::Failed`] report carrying the empty structure, so reward
//! computation can fall back to the empty prediction.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::output::{dedup_in_place, EeOutput, NerOutput, ReOutput, StructuredOutput, TriggerGroup};
use super::schema::{Task, TaskSchema};

pub const VALUE_SEP: &str = " | ";
pub const PAIR_SEP: &str = ", ";
pub const ROLE_SEP: &str = ": ";
pub const ARG_SEP: &str = "; ";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ParseStatus {
    Ok,
    Recovered,
    Failed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    /// The object was found inside surrounding non-JSON text.
    SurroundingText,
    NoObject,
    UnknownKey,
    UnknownRole,
    NonStringValue,
    EmptyItem,
    MalformedPair,
    MalformedSegment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseIssue {
    /// Where the problem is: a byte offset for object location problems,
    /// otherwise `key[item]` within the object.
    pub at: String,
    pub kind: IssueKind,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParseReport<T> {
    pub output: T,
    pub status: ParseStatus,
    pub issues: Vec<ParseIssue>,
}

impl<T> ParseReport<T> {
    pub fn is_failed(&self) -> bool {
        self.status == ParseStatus::Failed
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> ParseReport<U> {
        ParseReport {
            output: f(self.output),
            status: self.status,
            issues: self.issues,
        }
    }
}

/// Finds the top-level JSON object in a generation.
///
/// The whole trimmed text is tried first; failing that, each `{` is tried as
/// the start of an object and trailing text is ignored. Returns the object and
/// whether it had to be cut out of surrounding text.
pub fn find_object(text: &str) -> Option<(Map<String, Value>, Option<usize>)> {
    let trimmed = text.trim();
    if let Ok(Value::Object(map)) = serde_json::from_str::<Value>(trimmed) {
        return Some((map, None));
    }
    for (offset, _) in text.match_indices('{') {
        let mut stream = serde_json::Deserializer::from_str(&text[offset..]).into_iter::<Value>();
        if let Some(Ok(Value::Object(map))) = stream.next() {
            return Some((map, Some(offset)));
        }
    }
    None
}

struct Ctx<'a> {
    schema: &'a TaskSchema,
    strict: bool,
    issues: Vec<ParseIssue>,
}

impl<'a> Ctx<'a> {
    fn issue(&mut self, at: impl Into<String>, kind: IssueKind, message: impl Into<String>) {
        self.issues.push(ParseIssue {
            at: at.into(),
            kind,
            message: message.into(),
        });
    }

    /// Yields `(key, value string)` for every schema key, recording issues for the rest.
    fn string_entries<'m>(&mut self, map: &'m Map<String, Value>) -> Vec<(&'m str, &'m str)> {
        let mut entries = Vec::with_capacity(map.len());
        for (key, value) in map {
            if !self.schema.has_label(key) {
                self.issue(key.clone(), IssueKind::UnknownKey, format!("`{key}` is not a schema label"));
                continue;
            }
            match value {
                Value::String(s) => entries.push((key.as_str(), s.as_str())),
                Value::Null => {}
                other => self.issue(
                    key.clone(),
                    IssueKind::NonStringValue,
                    format!("expected a string value, found {}", json_kind(other)),
                ),
            }
        }
        entries
    }

    fn split_values<'v>(&mut self, key: &str, value: &'v str) -> Vec<&'v str> {
        if value.trim().is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (i, piece) in value.split(VALUE_SEP).enumerate() {
            let piece = piece.trim();
            if piece.is_empty() {
                self.issue(format!("{key}[{i}]"), IssueKind::EmptyItem, "empty value between separators");
            } else {
                out.push(piece);
            }
        }
        out
    }

    fn finish<T>(self, output: T, empty: impl FnOnce() -> T, located: Option<usize>) -> ParseReport<T> {
        let mut issues = self.issues;
        if let Some(offset) = located {
            issues.insert(
                0,
                ParseIssue {
                    at: offset.to_string(),
                    kind: IssueKind::SurroundingText,
                    message: "ignored text outside the JSON object".into(),
                },
            );
        }
        let fatal = self.strict
            && issues
                .iter()
                .any(|i| i.kind != IssueKind::SurroundingText);
        if fatal {
            ParseReport {
                output: empty(),
                status: ParseStatus::Failed,
                issues,
            }
        } else if issues.is_empty() {
            ParseReport {
                output,
                status: ParseStatus::Ok,
                issues,
            }
        } else {
            ParseReport {
                output,
                status: ParseStatus::Recovered,
                issues,
            }
        }
    }
}

fn json_kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn no_object<T>(empty: T) -> ParseReport<T> {
    ParseReport {
        output: empty,
        status: ParseStatus::Failed,
        issues: vec![ParseIssue {
            at: "0".into(),
            kind: IssueKind::NoObject,
            message: "no parseable JSON object in text".into(),
        }],
    }
}

pub fn parse_ner(text: &str, schema: &TaskSchema, strict: bool) -> ParseReport<NerOutput> {
    debug_assert_eq!(schema.task, Task::Ner);
    let Some((map, located)) = find_object(text) else {
        return no_object(NerOutput::empty(schema));
    };
    let mut ctx = Ctx {
        schema,
        strict,
        issues: Vec::new(),
    };
    let mut out = NerOutput::empty(schema);
    for (key, value) in ctx.string_entries(&map) {
        for mention in ctx.split_values(key, value) {
            out.push(key, mention);
        }
    }
    ctx.finish(out, || NerOutput::empty(schema), located)
}

pub fn parse_re(text: &str, schema: &TaskSchema, strict: bool) -> ParseReport<ReOutput> {
    debug_assert_eq!(schema.task, Task::Re);
    let Some((map, located)) = find_object(text) else {
        return no_object(ReOutput::empty(schema));
    };
    let mut ctx = Ctx {
        schema,
        strict,
        issues: Vec::new(),
    };
    let mut out = ReOutput::empty(schema);
    for (key, value) in ctx.string_entries(&map) {
        for (i, pair) in ctx.split_values(key, value).into_iter().enumerate() {
            match split_pair(pair) {
                Some((head, tail)) => out.push(key, head, tail),
                None => ctx.issue(
                    format!("{key}[{i}]"),
                    IssueKind::MalformedPair,
                    format!("`{pair}` is not of the form `head, tail`"),
                ),
            }
        }
    }
    ctx.finish(out, || ReOutput::empty(schema), located)
}

fn split_pair(pair: &str) -> Option<(&str, &str)> {
    let (head, tail) = pair.split_once(PAIR_SEP)?;
    let (head, tail) = (head.trim(), tail.trim());
    (!head.is_empty() && !tail.is_empty()).then_some((head, tail))
}

pub fn parse_ee(text: &str, schema: &TaskSchema, strict: bool) -> ParseReport<EeOutput> {
    debug_assert_eq!(schema.task, Task::Ee);
    let Some((map, located)) = find_object(text) else {
        return no_object(EeOutput::empty(schema));
    };
    let mut ctx = Ctx {
        schema,
        strict,
        issues: Vec::new(),
    };
    let mut out = EeOutput::empty(schema);
    for (key, value) in ctx.string_entries(&map) {
        for (i, group) in ctx.split_values(key, value).into_iter().enumerate() {
            if let Some(group) = parse_group(&mut ctx, &format!("{key}[{i}]"), group) {
                out.push(key, group);
            }
        }
    }
    ctx.finish(out, || EeOutput::empty(schema), located)
}

fn parse_group(ctx: &mut Ctx<'_>, at: &str, text: &str) -> Option<TriggerGroup> {
    let mut segments = text.split(ARG_SEP);
    let first = segments.next().unwrap_or_default();
    let (trigger, rest) = match first.split_once(ROLE_SEP) {
        Some((trigger, rest)) => (trigger.trim(), Some(rest)),
        None => (first.trim(), None),
    };
    if trigger.is_empty() {
        ctx.issue(at, IssueKind::MalformedSegment, "trigger group has an empty trigger");
        return None;
    }
    let mut args = Vec::new();
    if rest.is_none() && text.contains(ARG_SEP) {
        ctx.issue(
            at,
            IssueKind::MalformedSegment,
            format!("trigger `{trigger}` is not followed by `: `"),
        );
    }
    for (j, segment) in rest.into_iter().chain(segments).enumerate() {
        let seg_at = format!("{at}.{j}");
        if let Some(pair) = split_role(ctx, &seg_at, segment.trim()) {
            args.push(pair);
        }
    }
    dedup_in_place(&mut args);
    Some(TriggerGroup {
        trigger: trigger.to_string(),
        args,
    })
}

fn split_role(ctx: &mut Ctx<'_>, at: &str, segment: &str) -> Option<(String, String)> {
    let roles = &ctx.schema.roles;
    if ctx.strict && !roles.is_empty() {
        // Longest known role followed by ": ", so arguments may contain ": ".
        let role = roles
            .iter()
            .filter(|r| {
                segment
                    .strip_prefix(r.as_str())
                    .is_some_and(|rest| rest.starts_with(ROLE_SEP))
            })
            .max_by_key(|r| r.len());
        return match role {
            Some(role) => {
                let argument = segment[role.len() + ROLE_SEP.len()..].trim();
                if argument.is_empty() {
                    ctx.issue(at, IssueKind::MalformedSegment, format!("role `{role}` has no argument"));
                    None
                } else {
                    Some((role.clone(), argument.to_string()))
                }
            }
            None => {
                ctx.issue(
                    at,
                    IssueKind::UnknownRole,
                    format!("`{segment}` does not start with a schema role"),
                );
                None
            }
        };
    }
    let Some((role, argument)) = segment.split_once(ROLE_SEP) else {
        ctx.issue(at, IssueKind::MalformedSegment, format!("`{segment}` is not of the form `ROLE: argument`"));
        return None;
    };
    let (role, argument) = (role.trim(), argument.trim());
    if role.is_empty() || argument.is_empty() {
        ctx.issue(at, IssueKind::MalformedSegment, format!("`{segment}` has an empty role or argument"));
        return None;
    }
    if !roles.is_empty() && !ctx.schema.has_role(role) {
        ctx.issue(at, IssueKind::UnknownRole, format!("`{role}` is not a schema role"));
    }
    Some((role.to_string(), argument.to_string()))
}

/// Parses according to `schema.task`.
pub fn parse(text: &str, schema: &TaskSchema, strict: bool) -> ParseReport<StructuredOutput> {
    match schema.task {
        Task::Ner => parse_ner(text, schema, strict).map(StructuredOutput::Ner),
        Task::Re => parse_re(text, schema, strict).map(StructuredOutput::Re),
        Task::Ee => parse_ee(text, schema, strict).map(StructuredOutput::Ee),
    }
}
