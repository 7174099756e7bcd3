use crate::codec::{parse, serialize, ParseIssue, SerializeMode, TaskSchema};

use super::DataError;

/// Rewrites a target in concise form: empty relation fields and empty event
/// entries are dropped, the unit sets are unchanged.
pub fn streamline(target: &str, schema: &TaskSchema) -> Result<String, DataError> {
    let report = parse(target, schema, true);
    if report.is_failed() {
        return Err(DataError::UnparseableTarget {
            diagnosis: diagnose(&report.issues),
        });
    }
    Ok(serialize(&report.output, schema, SerializeMode::Concise))
}

fn diagnose(issues: &[ParseIssue]) -> String {
    issues
        .iter()
        .map(|i| format!("{} (at {})", i.message, i.at))
        .collect::<Vec<_>>()
        .join("; ")
}
