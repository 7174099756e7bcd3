use serde::{Deserialize, Serialize};

use super::ee::GroupAlignment;
use crate::codec::Task;

/// One signed term of a reward.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardTerm {
    pub name: String,
    /// The metric before any exponent.
    pub raw: f64,
    /// The metric after the exponent (equal to `raw` for unexponentiated terms).
    pub value: f64,
    pub weight: f64,
    /// `±weight · value`; penalties are negative.
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardBreakdown {
    pub task: Task,
    /// Final reward, clamped to `[0, 1]` when `clipped`.
    pub total: f64,
    /// Sum of the term contributions.
    pub unclipped: f64,
    pub clipped: bool,
    pub terms: Vec<RewardTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alignment: Option<GroupAlignment>,
}

impl RewardBreakdown {
    pub fn term(&self, name: &str) -> Option<&RewardTerm> {
        self.terms.iter().find(|t| t.name == name)
    }
}

#[derive(Default)]
pub(crate) struct TermsBuilder {
    terms: Vec<RewardTerm>,
}

impl TermsBuilder {
    pub(crate) fn gain(&mut self, name: &str, raw: f64, weight: f64) -> &mut Self {
        self.push(name, raw, raw, weight, weight * raw)
    }

    pub(crate) fn stretched_gain(&mut self, name: &str, raw: f64, gamma: f64, weight: f64) -> &mut Self {
        let value = raw.powf(gamma);
        self.push(name, raw, value, weight, weight * value)
    }

    pub(crate) fn penalty(&mut self, name: &str, raw: f64, weight: f64) -> &mut Self {
        self.push(name, raw, raw, weight, -(weight * raw))
    }

    fn push(&mut self, name: &str, raw: f64, value: f64, weight: f64, contribution: f64) -> &mut Self {
        self.terms.push(RewardTerm {
            name: name.to_string(),
            raw,
            value,
            weight,
            contribution,
        });
        self
    }

    pub(crate) fn finish(self, task: Task, clip: bool, alignment: Option<GroupAlignment>) -> RewardBreakdown {
        let unclipped: f64 = self.terms.iter().map(|t| t.contribution).sum();
        let total = if clip {
            unclipped.clamp(0.0, 1.0)
        } else {
            unclipped
        };
        RewardBreakdown {
            task,
            total,
            unclipped,
            clipped: clip,
            terms: self.terms,
            alignment,
        }
    }
}
