//! Dataset-level evaluation: micro-averaged F1 over exact-match units,
//! slot exact-match accuracy and token-length percentile buckets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::BufRead;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::codec::{extract_units, find_object, parse, Task, TaskSchema, UnitSets};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("gold annotation failed to parse for record(s): {}", .0.join(", "))]
    GoldUnparseable(Vec<String>),
    #[error("metric needs a {expected} schema, got {actual}")]
    WrongTask { expected: &'static str, actual: Task },
    #[error("no records to evaluate")]
    NoRecords,
    #[error("no texts to bucket")]
    NoTexts,
    #[error("line {line}: {message}")]
    BadLine { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub id: String,
    pub gold: String,
    pub pred: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

/// Reads `{id, gold, pred, source}` objects, one per line. Blank lines are skipped.
pub fn read_records(reader: impl BufRead) -> Result<Vec<EvalRecord>, EvalError> {
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| EvalError::BadLine {
            line: i + 1,
            message: e.to_string(),
        })?;
        records.push(record);
    }
    Ok(records)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Counts {
    fn add_sets<T: Ord>(&mut self, gold: &BTreeSet<T>, pred: &BTreeSet<T>) {
        let tp = gold.intersection(pred).count();
        self.tp += tp;
        self.fp += pred.len() - tp;
        self.fn_ += gold.len() - tp;
    }

    pub fn merge(&mut self, other: Counts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
    }

    fn ratio(num: usize, denom: usize) -> f64 {
        if denom == 0 {
            0.0
        } else {
            num as f64 / denom as f64
        }
    }

    pub fn precision(&self) -> f64 {
        Self::ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> f64 {
        Self::ratio(self.tp, self.tp + self.fn_)
    }

    pub fn f1(&self) -> f64 {
        Self::ratio(2 * self.tp, 2 * self.tp + self.fp + self.fn_)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub metric: String,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub per_label: BTreeMap<String, Counts>,
}

impl MetricReport {
    fn from_counts(metric: &str, per_label: BTreeMap<String, Counts>) -> Self {
        let mut total = Counts::default();
        for c in per_label.values() {
            total.merge(*c);
        }
        Self {
            metric: metric.to_string(),
            tp: total.tp,
            fp: total.fp,
            fn_: total.fn_,
            precision: total.precision(),
            recall: total.recall(),
            f1: total.f1(),
            per_label,
        }
    }

    /// Aligned plain-text table, one row per label plus a micro-average row.
    pub fn to_table(&self) -> String {
        let width = self
            .per_label
            .keys()
            .map(|k| k.chars().count())
            .chain([self.metric.len(), 5])
            .max()
            .unwrap_or(5);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:>6}  {:>6}  {:>6}  {:>9}  {:>9}  {:>9}",
            self.metric, "tp", "fp", "fn", "precision", "recall", "f1"
        );
        for (label, c) in &self.per_label {
            let _ = writeln!(
                out,
                "{:<width$}  {:>6}  {:>6}  {:>6}  {:>9.4}  {:>9.4}  {:>9.4}",
                label,
                c.tp,
                c.fp,
                c.fn_,
                c.precision(),
                c.recall(),
                c.f1()
            );
        }
        let _ = writeln!(
            out,
            "{:<width$}  {:>6}  {:>6}  {:>6}  {:>9.4}  {:>9.4}  {:>9.4}",
            "micro", self.tp, self.fp, self.fn_, self.precision, self.recall, self.f1
        );
        out
    }
}

/// Parses every record; gold failures are collected and reported together.
fn unit_pairs(records: &[EvalRecord], schema: &TaskSchema) -> Result<Vec<(UnitSets, UnitSets)>, EvalError> {
    let mut failed = Vec::new();
    let mut pairs = Vec::with_capacity(records.len());
    for record in records {
        let gold = parse(&record.gold, schema, false);
        if gold.is_failed() {
            failed.push(record.id.clone());
            continue;
        }
        let pred = parse(&record.pred, schema, false);
        pairs.push((extract_units(&gold.output), extract_units(&pred.output)));
    }
    if failed.is_empty() {
        Ok(pairs)
    } else {
        Err(EvalError::GoldUnparseable(failed))
    }
}

fn count_by_label<T: Ord + Clone>(
    per_label: &mut BTreeMap<String, Counts>,
    gold: &BTreeSet<T>,
    pred: &BTreeSet<T>,
    label_of: impl Fn(&T) -> &str,
) {
    let labels: BTreeSet<&str> = gold.iter().chain(pred.iter()).map(&label_of).collect();
    for label in labels {
        let g: BTreeSet<T> = gold.iter().filter(|u| label_of(u) == label).cloned().collect();
        let p: BTreeSet<T> = pred.iter().filter(|u| label_of(u) == label).cloned().collect();
        per_label.entry(label.to_string()).or_default().add_sets(&g, &p);
    }
}

/// Span-level micro-F1: `(label, mention)` units for NER, `(type, head, tail)` for RE.
pub fn micro_f1(records: &[EvalRecord], schema: &TaskSchema) -> Result<MetricReport, EvalError> {
    if schema.task == Task::Ee {
        return Err(EvalError::WrongTask {
            expected: "ner or re",
            actual: schema.task,
        });
    }
    let mut per_label = BTreeMap::new();
    for (gold, pred) in unit_pairs(records, schema)? {
        match (gold, pred) {
            (UnitSets::Ner(g), UnitSets::Ner(p)) => count_by_label(&mut per_label, &g.pairs, &p.pairs, |u| &u.0),
            (UnitSets::Re(g), UnitSets::Re(p)) => count_by_label(&mut per_label, &g.triples, &p.triples, |u| &u.0),
            _ => unreachable!("units follow the schema task"),
        }
    }
    Ok(MetricReport::from_counts("micro_f1", per_label))
}

fn expect_ee(schema: &TaskSchema) -> Result<(), EvalError> {
    if schema.task == Task::Ee {
        Ok(())
    } else {
        Err(EvalError::WrongTask {
            expected: "ee",
            actual: schema.task,
        })
    }
}

/// Micro-F1 over `(event type, trigger)` units, broken down by event type.
pub fn trigger_f1(records: &[EvalRecord], schema: &TaskSchema) -> Result<MetricReport, EvalError> {
    expect_ee(schema)?;
    let mut per_label = BTreeMap::new();
    for (gold, pred) in unit_pairs(records, schema)? {
        if let (UnitSets::Ee(g), UnitSets::Ee(p)) = (gold, pred) {
            count_by_label(&mut per_label, &g.triggers, &p.triggers, |u| &u.0);
        }
    }
    Ok(MetricReport::from_counts("trigger_f1", per_label))
}

/// `(event type, role, argument)` units pooled over all trigger groups.
pub fn argument_units(units: &crate::codec::EeUnits) -> BTreeSet<(String, String, String)> {
    units
        .groups
        .iter()
        .flat_map(|(event_type, groups)| {
            groups.iter().flat_map(move |g| {
                g.pairs
                    .iter()
                    .map(move |(role, arg)| (event_type.clone(), role.clone(), arg.clone()))
            })
        })
        .collect()
}

/// Micro-F1 over pooled `(event type, role, argument)` units, broken down by role.
pub fn argument_f1(records: &[EvalRecord], schema: &TaskSchema) -> Result<MetricReport, EvalError> {
    expect_ee(schema)?;
    let mut per_label = BTreeMap::new();
    for (gold, pred) in unit_pairs(records, schema)? {
        if let (UnitSets::Ee(g), UnitSets::Ee(p)) = (gold, pred) {
            count_by_label(&mut per_label, &argument_units(&g), &argument_units(&p), |u| &u.1);
        }
    }
    Ok(MetricReport::from_counts("argument_f1", per_label))
}

fn slot_value(object: Option<&serde_json::Map<String, Value>>, slot: &str) -> Option<String> {
    match object?.get(slot)? {
        Value::String(s) => Some(s.trim().to_string()),
        Value::Null => None,
        other => Some(other.to_string()),
    }
}

/// Per-slot exact-match accuracy after trimming surrounding whitespace.
///
/// A slot missing from the gold object counts as the empty string; a slot
/// missing from the prediction only matches an empty gold value.
pub fn exact_acc(records: &[EvalRecord], slots: &[String]) -> Result<IndexMap<String, f64>, EvalError> {
    if records.is_empty() {
        return Err(EvalError::NoRecords);
    }
    let mut correct = vec![0usize; slots.len()];
    for record in records {
        let gold = find_object(&record.gold).map(|(m, _)| m);
        let pred = find_object(&record.pred).map(|(m, _)| m);
        for (i, slot) in slots.iter().enumerate() {
            let g = slot_value(gold.as_ref(), slot).unwrap_or_default();
            let hit = match slot_value(pred.as_ref(), slot) {
                Some(p) => p == g,
                None => g.is_empty(),
            };
            correct[i] += usize::from(hit);
        }
    }
    let n = records.len() as f64;
    Ok(slots
        .iter()
        .zip(correct)
        .map(|(s, c)| (s.clone(), c as f64 / n))
        .collect())
}

/// Counts tokens in a text.
pub trait TokenCounter {
    fn id(&self) -> &str;
    fn count(&self, text: &str) -> usize;
}

/// Whitespace-delimited tokens.
#[derive(Debug, Clone, Copy, Default)]
pub struct WhitespaceTokens;

impl TokenCounter for WhitespaceTokens {
    fn id(&self) -> &str {
        "whitespace"
    }

    fn count(&self, text: &str) -> usize {
        text.split_whitespace().count()
    }
}

/// Unicode scalar values.
#[derive(Debug, Clone, Copy, Default)]
pub struct CharTokens;

impl TokenCounter for CharTokens {
    fn id(&self) -> &str {
        "chars"
    }

    fn count(&self, text: &str) -> usize {
        text.chars().count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bucket {
    pub percentile: u32,
    pub threshold: usize,
    pub min: usize,
    pub mean: f64,
    pub max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthBuckets {
    pub tokenizer: String,
    pub buckets: Vec<Bucket>,
}

impl LengthBuckets {
    pub fn get(&self, percentile: u32) -> Option<&Bucket> {
        self.buckets.iter().find(|b| b.percentile == percentile)
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("{:<6}  {:>9}  {:>6}  {:>9}  {:>6}\n", "bucket", "threshold", "min", "mean", "max");
        for b in &self.buckets {
            let _ = writeln!(
                out,
                "{:<6}  {:>9}  {:>6}  {:>9.2}  {:>6}",
                format!("P{}", b.percentile),
                b.threshold,
                b.min,
                b.mean,
                b.max
            );
        }
        out
    }
}

pub const PERCENTILES: [u32; 3] = [50, 70, 99];

/// Nearest-rank percentile: the `ceil(p·n/100)`-th smallest value.
pub fn nearest_rank(sorted: &[usize], percentile: u32) -> usize {
    let n = sorted.len();
    let rank = (percentile as usize * n).div_ceil(100).max(1);
    sorted[rank.min(n) - 1]
}

/// Min/mean/max token counts of the examples at or below each percentile threshold.
pub fn length_buckets<S: AsRef<str>>(texts: &[S], counter: &dyn TokenCounter) -> Result<LengthBuckets, EvalError> {
    if texts.is_empty() {
        return Err(EvalError::NoTexts);
    }
    let mut counts: Vec<usize> = texts.iter().map(|t| counter.count(t.as_ref())).collect();
    counts.sort_unstable();
    let buckets = PERCENTILES
        .iter()
        .map(|&p| {
            let threshold = nearest_rank(&counts, p);
            let below: Vec<usize> = counts.iter().copied().take_while(|&c| c <= threshold).collect();
            Bucket {
                percentile: p,
                threshold,
                min: below[0],
                mean: below.iter().sum::<usize>() as f64 / below.len() as f64,
                max: *below.last().expect("threshold is a member"),
            }
        })
        .collect();
    Ok(LengthBuckets {
        tokenizer: counter.id().to_string(),
        buckets,
    })
}
