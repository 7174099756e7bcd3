use super::breakdown::{RewardBreakdown, TermsBuilder};
use super::config::SfrConfig;
use super::sets::{cov, f1, sym_diff_norm};
use crate::codec::{NerUnits, Task};

/// Type coverage plus stretched pair F1, minus normalized symmetric-difference
/// penalties on types and pairs.
pub fn reward_ner(gold: &NerUnits, pred: &NerUnits, cfg: &SfrConfig) -> RewardBreakdown {
    let w = &cfg.ner;
    let mut terms = TermsBuilder::default();
    terms
        .gain("cov_types", cov(&gold.types, &pred.types), w.w_t)
        .stretched_gain(
            "f1_pairs",
            f1(&gold.pairs, &pred.pairs, cfg.f1_empty_empty),
            w.gamma,
            w.w_p,
        )
        .penalty("delta_types", sym_diff_norm(&gold.types, &pred.types), w.lambda_t)
        .penalty("delta_pairs", sym_diff_norm(&gold.pairs, &pred.pairs), w.lambda_p);
    terms.finish(Task::Ner, cfg.clip_to_unit, None)
}
