use serde::{Deserialize, Serialize};

use super::breakdown::{RewardBreakdown, TermsBuilder};
use super::config::SfrConfig;
use super::sets::{cov, sym_diff_norm};
use crate::codec::{EeUnits, GroupUnits, Task};

/// A matched gold/predicted trigger group pair within one event type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupMatch {
    pub event_type: String,
    pub gold_index: usize,
    pub pred_index: usize,
    pub overlap: usize,
}

/// Outcome of matching gold trigger groups to predicted ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupAlignment {
    pub matches: Vec<GroupMatch>,
    /// `(event type, group index)` of unmatched gold groups.
    pub unmatched_gold: Vec<(String, usize)>,
    pub unmatched_pred: Vec<(String, usize)>,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub f_full: f64,
}

/// Matches trigger groups within each event type by role-argument overlap.
///
/// Greedy: the free pair with the largest overlap is taken first, ties going
/// to the lowest gold index and then the lowest predicted index. Pairs with no
/// overlap are never matched. Role-argument pairs of matched groups that
/// overlap count as true positives; everything else is a false positive or
/// false negative. `f_full` is 1 when there is nothing to count.
pub fn align_trigger_groups(gold: &EeUnits, pred: &EeUnits) -> GroupAlignment {
    let empty: Vec<GroupUnits> = Vec::new();
    let mut event_types: Vec<&String> = gold.groups.keys().chain(pred.groups.keys()).collect();
    event_types.sort();
    event_types.dedup();

    let mut alignment = GroupAlignment {
        matches: Vec::new(),
        unmatched_gold: Vec::new(),
        unmatched_pred: Vec::new(),
        tp: 0,
        fp: 0,
        fn_: 0,
        f_full: 0.0,
    };
    let mut gold_pairs = 0;
    let mut pred_pairs = 0;

    for event_type in event_types {
        let g = gold.groups.get(event_type).unwrap_or(&empty);
        let p = pred.groups.get(event_type).unwrap_or(&empty);
        gold_pairs += g.iter().map(|x| x.pairs.len()).sum::<usize>();
        pred_pairs += p.iter().map(|x| x.pairs.len()).sum::<usize>();

        let overlaps: Vec<Vec<usize>> = g
            .iter()
            .map(|gg| p.iter().map(|pp| gg.pairs.intersection(&pp.pairs).count()).collect())
            .collect();
        let mut gold_used = vec![false; g.len()];
        let mut pred_used = vec![false; p.len()];
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for (gi, row) in overlaps.iter().enumerate() {
                if gold_used[gi] {
                    continue;
                }
                for (pi, &overlap) in row.iter().enumerate() {
                    if pred_used[pi] || overlap == 0 {
                        continue;
                    }
                    // Strict comparison keeps the earliest (gold, pred) index on ties.
                    if best.is_none_or(|(_, _, o)| overlap > o) {
                        best = Some((gi, pi, overlap));
                    }
                }
            }
            let Some((gi, pi, overlap)) = best else { break };
            gold_used[gi] = true;
            pred_used[pi] = true;
            alignment.tp += overlap;
            alignment.matches.push(GroupMatch {
                event_type: event_type.clone(),
                gold_index: gi,
                pred_index: pi,
                overlap,
            });
        }
        alignment.unmatched_gold.extend(
            gold_used
                .iter()
                .enumerate()
                .filter(|(_, used)| !**used)
                .map(|(i, _)| (event_type.clone(), i)),
        );
        alignment.unmatched_pred.extend(
            pred_used
                .iter()
                .enumerate()
                .filter(|(_, used)| !**used)
                .map(|(i, _)| (event_type.clone(), i)),
        );
    }

    alignment.fn_ = gold_pairs - alignment.tp;
    alignment.fp = pred_pairs - alignment.tp;
    let denom = 2 * alignment.tp + alignment.fp + alignment.fn_;
    alignment.f_full = if denom == 0 {
        1.0
    } else {
        2.0 * alignment.tp as f64 / denom as f64
    };
    alignment
}

/// Which branch of the coarse-to-fine EE penalty fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PenaltyBranch {
    Event,
    Trigger,
    Fine,
}

impl PenaltyBranch {
    pub fn term_name(self) -> &'static str {
        match self {
            PenaltyBranch::Event => "pen_event",
            PenaltyBranch::Trigger => "pen_trigger",
            PenaltyBranch::Fine => "pen_fine",
        }
    }
}

/// Returns the firing branch, its raw mismatch and its weight.
pub fn ee_penalty_terms(gold: &EeUnits, pred: &EeUnits, f_full: f64, cfg: &SfrConfig) -> (PenaltyBranch, f64, f64) {
    let delta_event = sym_diff_norm(&gold.events, &pred.events);
    if delta_event > 0.0 {
        return (PenaltyBranch::Event, delta_event, cfg.ee.lambda_event);
    }
    let delta_trigger = sym_diff_norm(&gold.triggers, &pred.triggers);
    if delta_trigger > 0.0 {
        return (PenaltyBranch::Trigger, delta_trigger, cfg.ee.lambda_trigger);
    }
    (PenaltyBranch::Fine, 1.0 - f_full, cfg.ee.lambda_full)
}

/// Event mismatch outranks trigger mismatch, which outranks residual argument error.
pub fn ee_penalty(gold: &EeUnits, pred: &EeUnits, f_full: f64, cfg: &SfrConfig) -> f64 {
    let (_, raw, weight) = ee_penalty_terms(gold, pred, f_full, cfg);
    weight * raw
}

pub fn reward_ee(gold: &EeUnits, pred: &EeUnits, cfg: &SfrConfig) -> RewardBreakdown {
    let w = &cfg.ee;
    let alignment = align_trigger_groups(gold, pred);
    let (branch, raw, weight) = ee_penalty_terms(gold, pred, alignment.f_full, cfg);
    let mut terms = TermsBuilder::default();
    terms
        .gain("cov_events", cov(&gold.events, &pred.events), w.w_event)
        .gain("cov_triggers", cov(&gold.triggers, &pred.triggers), w.w_trigger)
        .stretched_gain("f_full", alignment.f_full, w.gamma, w.w_full)
        .penalty(branch.term_name(), raw, weight);
    terms.finish(Task::Ee, cfg.clip_to_unit, Some(alignment))
}
