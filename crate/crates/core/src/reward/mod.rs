//! Stepwise fine-grained rewards over structural unit sets.
//!
//! Each task reward combines coverage on coarse units, an exponentiated F1 on
//! fine units and mismatch penalties. The building blocks live in [`sets`];
//! [`score`] is the text-level entry point used for rollout scoring.

mod breakdown;
mod config;
mod ee;
mod ner;
mod re;
pub mod sets;

pub use breakdown::{RewardBreakdown, RewardTerm};
pub use config::{ConfigError, EeWeights, NerWeights, ReWeights, SfrConfig};
pub use ee::{align_trigger_groups, ee_penalty, ee_penalty_terms, reward_ee, GroupAlignment, GroupMatch, PenaltyBranch};
pub use ner::reward_ner;
pub use re::reward_re;
pub use sets::{cov, f1, jaccard_dist, sym_diff_norm};

use thiserror::Error;

use crate::codec::{extract_units, parse, ParseIssue, TaskSchema, UnitSets};

#[derive(Debug, Error)]
pub enum ScoreError {
    /// The reference annotation could not be parsed: corrupt data, not a model failure.
    #[error("GoldUnparseable: {}", describe(.issues))]
    GoldUnparseable { issues: Vec<ParseIssue> },
    #[error("gold and prediction unit sets belong to different tasks")]
    TaskMismatch,
}

fn describe(issues: &[ParseIssue]) -> String {
    issues
        .iter()
        .map(|i| format!("{} at {}", i.message, i.at))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Dispatches to the task reward.
pub fn reward(gold: &UnitSets, pred: &UnitSets, cfg: &SfrConfig) -> Result<RewardBreakdown, ScoreError> {
    match (gold, pred) {
        (UnitSets::Ner(g), UnitSets::Ner(p)) => Ok(reward_ner(g, p, cfg)),
        (UnitSets::Re(g), UnitSets::Re(p)) => Ok(reward_re(g, p, cfg)),
        (UnitSets::Ee(g), UnitSets::Ee(p)) => Ok(reward_ee(g, p, cfg)),
        _ => Err(ScoreError::TaskMismatch),
    }
}

/// Gold units parsed leniently; fails only when no object can be recovered.
pub fn gold_units(gold_text: &str, schema: &TaskSchema) -> Result<UnitSets, ScoreError> {
    let report = parse(gold_text, schema, false);
    if report.is_failed() {
        return Err(ScoreError::GoldUnparseable {
            issues: report.issues,
        });
    }
    Ok(extract_units(&report.output))
}

/// Prediction units parsed leniently; a failed parse yields the empty units.
pub fn pred_units(pred_text: &str, schema: &TaskSchema) -> UnitSets {
    extract_units(&parse(pred_text, schema, false).output)
}

/// Scores one generation against its reference.
pub fn score(
    gold_text: &str,
    pred_text: &str,
    schema: &TaskSchema,
    cfg: &SfrConfig,
) -> Result<RewardBreakdown, ScoreError> {
    let gold = gold_units(gold_text, schema)?;
    reward(&gold, &pred_units(pred_text, schema), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re_schema() -> TaskSchema {
        TaskSchema::re([
            "conjunction",
            "feature of",
            "hyponym of",
            "used for",
            "part of",
            "compare",
            "evaluate for",
        ])
        .unwrap()
    }

    const FULL: &str = r#"{"conjunction": "", "feature of": "", "hyponym of": "", "used for": "surface, algorithm", "part of": "", "compare": "", "evaluate for": ""}"#;

    #[test]
    fn identical_scores_one() {
        let r = score(FULL, FULL, &re_schema(), &SfrConfig::default()).unwrap();
        assert!((r.total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn concise_gold_full_pred() {
        let r = score(r#"{"used for": "surface, algorithm"}"#, FULL, &re_schema(), &SfrConfig::default()).unwrap();
        assert!((r.total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn garbage_prediction_scores_as_empty() {
        let cfg = SfrConfig::default();
        let schema = re_schema();
        let garbage = score(FULL, "garbage not an object", &schema, &cfg).unwrap();
        let empty = reward_re(
            &crate::codec::re_units(&crate::codec::parse_re(FULL, &schema, true).output),
            &Default::default(),
            &cfg,
        );
        assert_eq!(garbage, empty);
    }

    #[test]
    fn unparseable_gold_is_an_error() {
        let err = score("nope", FULL, &re_schema(), &SfrConfig::default()).unwrap_err();
        assert!(matches!(err, ScoreError::GoldUnparseable { .. }));
        assert!(err.to_string().starts_with("GoldUnparseable"));
    }
}
