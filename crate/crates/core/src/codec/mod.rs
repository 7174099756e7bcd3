//! Parsing, canonical serialization and unit extraction for extraction outputs.

mod grounding;
mod output;
mod parse;
mod schema;
mod serialize;
mod units;

pub use grounding::check_grounding;
pub use output::{EeOutput, NerOutput, ReOutput, StructuredOutput, TriggerGroup};
pub use parse::{
    find_object, parse, parse_ee, parse_ner, parse_re, IssueKind, ParseIssue, ParseReport,
    ParseStatus, ARG_SEP, PAIR_SEP, ROLE_SEP, VALUE_SEP,
};
pub use schema::{SchemaError, Task, TaskSchema};
pub use serialize::{compact_json, serialize, SerializeMode};
pub use units::{ee_units, extract_units, ner_units, re_units, EeUnits, GroupUnits, NerUnits, Pair, ReUnits, Triple, UnitSets};
