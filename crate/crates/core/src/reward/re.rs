use super::breakdown::{RewardBreakdown, TermsBuilder};
use super::config::SfrConfig;
use super::sets::{cov, f1, jaccard_dist};
use crate::codec::{ReUnits, Task};

/// Triple F1 is the main signal; head and tail F1 add dense partial credit;
/// Jaccard distance bounds the penalties on types and triples.
pub fn reward_re(gold: &ReUnits, pred: &ReUnits, cfg: &SfrConfig) -> RewardBreakdown {
    let w = &cfg.re;
    let e = cfg.f1_empty_empty;
    let mut terms = TermsBuilder::default();
    terms
        .gain("cov_types", cov(&gold.types, &pred.types), w.w_t)
        .gain("f1_heads", f1(&gold.heads, &pred.heads, e), w.w_h)
        .gain("f1_tails", f1(&gold.tails, &pred.tails, e), w.w_a)
        .stretched_gain("f1_triples", f1(&gold.triples, &pred.triples, e), w.gamma, w.w_r)
        .penalty("jac_types", jaccard_dist(&gold.types, &pred.types), w.lambda_t)
        .penalty("jac_triples", jaccard_dist(&gold.triples, &pred.triples), w.lambda_r);
    terms.finish(Task::Re, cfg.clip_to_unit, None)
}
