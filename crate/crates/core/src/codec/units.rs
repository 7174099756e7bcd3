//! Structural unit sets: the coarse and fine sets the rewards and metrics compare.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::output::{EeOutput, NerOutput, ReOutput, StructuredOutput};

pub type Pair = (String, String);
pub type Triple = (String, String, String);

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NerUnits {
    /// Entity types with at least one mention.
    pub types: BTreeSet<String>,
    /// `(type, mention)`.
    pub pairs: BTreeSet<Pair>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReUnits {
    pub types: BTreeSet<String>,
    /// `(type, head, tail)`.
    pub triples: BTreeSet<Triple>,
    /// `(type, head)`.
    pub heads: BTreeSet<Pair>,
    /// `(type, tail)`.
    pub tails: BTreeSet<Pair>,
}

/// Role-argument pairs of one trigger group.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupUnits {
    pub trigger: String,
    pub pairs: BTreeSet<Pair>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EeUnits {
    /// Event types with at least one trigger group.
    pub events: BTreeSet<String>,
    /// `(event type, trigger)`.
    pub triggers: BTreeSet<Pair>,
    /// Trigger groups per event type, in output order.
    pub groups: BTreeMap<String, Vec<GroupUnits>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "lowercase")]
pub enum UnitSets {
    Ner(NerUnits),
    Re(ReUnits),
    Ee(EeUnits),
}

impl NerUnits {
    pub fn from_pairs<L: Into<String>, M: Into<String>>(pairs: impl IntoIterator<Item = (L, M)>) -> Self {
        let mut units = Self::default();
        for (label, mention) in pairs {
            units.insert(label.into(), mention.into());
        }
        units
    }

    fn insert(&mut self, label: String, mention: String) {
        self.types.insert(label.clone());
        self.pairs.insert((label, mention));
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }
}

impl ReUnits {
    pub fn from_triples<T: Into<String>, H: Into<String>, A: Into<String>>(
        triples: impl IntoIterator<Item = (T, H, A)>,
    ) -> Self {
        let mut units = Self::default();
        for (ty, head, tail) in triples {
            units.insert(ty.into(), head.into(), tail.into());
        }
        units
    }

    fn insert(&mut self, ty: String, head: String, tail: String) {
        self.types.insert(ty.clone());
        self.heads.insert((ty.clone(), head.clone()));
        self.tails.insert((ty.clone(), tail.clone()));
        self.triples.insert((ty, head, tail));
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }
}

impl EeUnits {
    /// Appends a trigger group under `event_type`.
    pub fn push_group<R: Into<String>, A: Into<String>>(
        &mut self,
        event_type: impl Into<String>,
        trigger: impl Into<String>,
        pairs: impl IntoIterator<Item = (R, A)>,
    ) {
        let event_type = event_type.into();
        let trigger = trigger.into();
        self.events.insert(event_type.clone());
        self.triggers.insert((event_type.clone(), trigger.clone()));
        self.groups.entry(event_type).or_default().push(GroupUnits {
            trigger,
            pairs: pairs.into_iter().map(|(r, a)| (r.into(), a.into())).collect(),
        });
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Total number of role-argument pairs over all groups.
    pub fn pair_count(&self) -> usize {
        self.groups.values().flatten().map(|g| g.pairs.len()).sum()
    }
}

fn norm(s: &str) -> String {
    s.trim().to_string()
}

pub fn ner_units(output: &NerOutput) -> NerUnits {
    let mut units = NerUnits::default();
    for (label, mentions) in &output.slots {
        for mention in mentions {
            units.insert(norm(label), norm(mention));
        }
    }
    units
}

pub fn re_units(output: &ReOutput) -> ReUnits {
    let mut units = ReUnits::default();
    for (ty, pairs) in &output.relations {
        for (head, tail) in pairs {
            units.insert(norm(ty), norm(head), norm(tail));
        }
    }
    units
}

pub fn ee_units(output: &EeOutput) -> EeUnits {
    let mut units = EeUnits::default();
    for (event_type, groups) in &output.events {
        for group in groups {
            units.push_group(
                norm(event_type),
                norm(&group.trigger),
                group.args.iter().map(|(r, a)| (norm(r), norm(a))),
            );
        }
    }
    units
}

pub fn extract_units(output: &StructuredOutput) -> UnitSets {
    match output {
        StructuredOutput::Ner(o) => UnitSets::Ner(ner_units(o)),
        StructuredOutput::Re(o) => UnitSets::Re(re_units(o)),
        StructuredOutput::Ee(o) => UnitSets::Ee(ee_units(o)),
    }
}
