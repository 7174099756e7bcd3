//! Group-relative advantages for candidate generations and the three-phase
//! NER → RE → EE rollout schedule.
//!
//! The policy update itself belongs to the external trainer; this module only
//! turns the K rewards of one input into advantages.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{Task, TaskSchema};
use crate::reward::{gold_units, pred_units, reward, RewardBreakdown, ScoreError, SfrConfig};

pub const DEFAULT_EPSILON: f64 = 1e-8;

/// `(r_k − mean) / (popstd + epsilon)`; all zeros when the group has no variance.
pub fn group_advantages(rewards: &[f64], epsilon: f64) -> Vec<f64> {
    if rewards.is_empty() {
        return Vec::new();
    }
    // Rounding in the mean would otherwise leave a tiny spread on constant groups.
    if rewards.iter().all(|r| *r == rewards[0]) {
        return vec![0.0; rewards.len()];
    }
    let n = rewards.len() as f64;
    let mean = rewards.iter().sum::<f64>() / n;
    let var = rewards.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / n;
    let std = var.sqrt();
    rewards.iter().map(|r| (r - mean) / (std + epsilon)).collect()
}

/// One input's K sampled generations with their rewards and advantages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateGroup {
    pub example_id: String,
    pub task: Task,
    pub gold: String,
    pub candidates: Vec<String>,
    #[serde(default)]
    pub rewards: Vec<f64>,
    #[serde(default)]
    pub advantages: Vec<f64>,
}

impl CandidateGroup {
    pub fn new(example_id: impl Into<String>, task: Task, gold: impl Into<String>, candidates: Vec<String>) -> Self {
        Self {
            example_id: example_id.into(),
            task,
            gold: gold.into(),
            candidates,
            rewards: Vec::new(),
            advantages: Vec::new(),
        }
    }
}

/// Per-candidate breakdowns in input order. Candidates are scored in parallel.
pub fn score_candidates(
    gold: &str,
    candidates: &[String],
    schema: &TaskSchema,
    cfg: &SfrConfig,
) -> Result<Vec<RewardBreakdown>, ScoreError> {
    let gold = gold_units(gold, schema)?;
    candidates
        .par_iter()
        .map(|c| reward(&gold, &pred_units(c, schema), cfg))
        .collect()
}

/// Fills rewards (clipped per `cfg`) and advantages, preserving candidate order.
pub fn score_group(
    mut group: CandidateGroup,
    schema: &TaskSchema,
    cfg: &SfrConfig,
) -> Result<CandidateGroup, ScoreError> {
    debug_assert_eq!(group.task, schema.task);
    let breakdowns = score_candidates(&group.gold, &group.candidates, schema, cfg)?;
    group.rewards = breakdowns.iter().map(|b| b.total).collect();
    group.advantages = group_advantages(&group.rewards, DEFAULT_EPSILON);
    Ok(group)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phase {
    pub task: Task,
    pub dataset: String,
    pub instances: usize,
    pub rollout: usize,
    pub epochs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhasePlan {
    pub phases: Vec<Phase>,
}

impl PhasePlan {
    /// Phases must run NER, then RE, then EE.
    pub fn is_ordered(&self) -> bool {
        self.phases.windows(2).all(|w| w[0].task < w[1].task)
    }
}

pub fn default_phase_plan() -> PhasePlan {
    let phase = |task: Task, instances, rollout, epochs| Phase {
        task,
        dataset: format!("de-{task}"),
        instances,
        rollout,
        epochs,
    };
    PhasePlan {
        phases: vec![
            phase(Task::Ner, 80_000, 4, 2),
            phase(Task::Re, 50_000, 8, 3),
            phase(Task::Ee, 9_991, 8, 3),
        ],
    }
}
