mod common;

use proptest::prelude::*;

use common::*;
use sfr_kit::codec::{
    extract_units, parse, serialize, EeOutput, NerOutput, ParseStatus, ReOutput, SerializeMode, StructuredOutput,
    TaskSchema, TriggerGroup,
};
use sfr_kit::data::streamline;
use sfr_kit::reward::{reward_ee, reward_ner, reward_re, score};
use sfr_kit::SfrConfig;

// Mentions never contain separators, never start or end with spaces.
fn mention() -> impl Strategy<Value = String> {
    "[A-Za-z0-9][A-Za-z0-9 .'\"\\\\-]{0,10}[A-Za-z0-9]"
        .prop_filter("no double spaces", |s| !s.contains("  "))
}

fn ner_output() -> impl Strategy<Value = (TaskSchema, StructuredOutput)> {
    prop::collection::vec(prop::collection::vec(mention(), 0..4), 1..4).prop_map(|slots| {
        let labels: Vec<String> = (0..slots.len()).map(|i| format!("type {i}")).collect();
        let schema = TaskSchema::ner(labels.clone()).unwrap();
        let mut out = NerOutput::empty(&schema);
        for (label, values) in labels.iter().zip(slots) {
            for v in values {
                out.push(label, v);
            }
        }
        (schema, out.into())
    })
}

fn re_output() -> impl Strategy<Value = (TaskSchema, StructuredOutput)> {
    let pair = (mention(), mention().prop_filter("no pair separator", |s| !s.contains(", ")));
    prop::collection::vec(prop::collection::vec(pair, 0..3), 1..4).prop_map(|rels| {
        let labels: Vec<String> = (0..rels.len()).map(|i| format!("rel {i}")).collect();
        let schema = TaskSchema::re(labels.clone()).unwrap();
        let mut out = ReOutput::empty(&schema);
        for (label, pairs) in labels.iter().zip(rels) {
            for (h, t) in pairs {
                out.push(label, h, t);
            }
        }
        (schema, out.into())
    })
}

fn ee_output() -> impl Strategy<Value = (TaskSchema, StructuredOutput)> {
    let roles = ["Agent", "Place", "Time", "Place.City"];
    let group = (mention(), prop::collection::vec((0..roles.len(), mention()), 0..4));
    prop::collection::vec(prop::collection::vec(group, 0..3), 1..3).prop_map(move |events| {
        let labels: Vec<String> = (0..events.len()).map(|i| format!("event {i}")).collect();
        let schema = TaskSchema::ee(labels.clone(), roles).unwrap();
        let mut out = EeOutput::empty(&schema);
        for (label, groups) in labels.iter().zip(events) {
            for (trigger, args) in groups {
                out.push(label, TriggerGroup::new(trigger, args.into_iter().map(|(r, a)| (roles[r], a))));
            }
        }
        (schema, out.into())
    })
}

fn any_output() -> impl Strategy<Value = (TaskSchema, StructuredOutput)> {
    prop_oneof![ner_output(), re_output(), ee_output()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn full_serialization_round_trips((schema, out) in any_output()) {
        let text = serialize(&out, &schema, SerializeMode::Full);
        let report = parse(&text, &schema, true);
        prop_assert_eq!(report.status, ParseStatus::Ok);
        prop_assert_eq!(report.output, out);
    }

    #[test]
    fn concise_keeps_units((schema, out) in any_output()) {
        let text = serialize(&out, &schema, SerializeMode::Concise);
        let back = parse(&text, &schema, true);
        prop_assert_eq!(back.status, ParseStatus::Ok);
        prop_assert_eq!(extract_units(&back.output), extract_units(&out));
    }

    #[test]
    fn streamline_is_idempotent((schema, out) in any_output()) {
        let full = serialize(&out, &schema, SerializeMode::Full);
        let once = streamline(&full, &schema).unwrap();
        prop_assert_eq!(streamline(&once, &schema).unwrap(), once.clone());
        prop_assert!(once.len() <= full.len());
    }

    #[test]
    fn self_score_is_one((schema, out) in any_output()) {
        prop_assume!(!out.is_empty());
        let text = serialize(&out, &schema, SerializeMode::Full);
        let concise = serialize(&out, &schema, SerializeMode::Concise);
        let r = score(&text, &concise, &schema, &SfrConfig::default()).unwrap();
        prop_assert!((r.total - 1.0).abs() < 1e-12, "{}", r.total);
    }

    #[test]
    fn clipped_rewards_stay_in_unit_interval((schema, gold) in any_output(), noise in "\\PC{0,40}") {
        let cfg = SfrConfig { clip_to_unit: true, ..SfrConfig::default() };
        let gold = serialize(&gold, &schema, SerializeMode::Full);
        let r = score(&gold, &noise, &schema, &cfg).unwrap();
        prop_assert!((0.0..=1.0).contains(&r.total));
        prop_assert!(r.unclipped.is_finite());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn ner_matches_oracle(
        g in prop::sample::subsequence(ner_universe(), 0..=9),
        p in prop::sample::subsequence(ner_universe(), 0..=9),
    ) {
        let r = reward_ner(&ner_units_of(&g), &ner_units_of(&p), &SfrConfig::default()).total;
        prop_assert!((r - oracle_ner(&g, &p, &DEFAULTS)).abs() < 1e-12);
    }

    #[test]
    fn re_matches_oracle(
        g in prop::sample::subsequence(re_universe(), 0..=8),
        p in prop::sample::subsequence(re_universe(), 0..=8),
    ) {
        let r = reward_re(&re_units_of(&g), &re_units_of(&p), &SfrConfig::default()).total;
        prop_assert!((r - oracle_re(&g, &p, &DEFAULTS)).abs() < 1e-12);
    }

    #[test]
    fn ee_matches_oracle(g in 0..257usize, p in 0..257usize) {
        let all = ee_universe();
        let r = reward_ee(&ee_units_of(&all[g]), &ee_units_of(&all[p]), &SfrConfig::default()).total;
        prop_assert!((r - oracle_ee(&all[g], &all[p], &DEFAULTS)).abs() < 1e-12);
    }
}

#[test]
fn universe_sizes() {
    assert_eq!(subsets(&ner_universe()).len(), 512);
    assert_eq!(subsets(&re_universe()).len(), 256);
    assert_eq!(ee_universe().len(), 257);
}

#[test]
fn exhaustive_sweep_agrees() {
    let (cases, worst) = oracle_sweep();
    assert!(cases >= 10_000);
    assert!(worst < 1e-12, "{worst:e}");
}

#[test]
fn oracle_reproduces_hand_values() {
    let s = |a: &str, b: &str| (a.to_string(), b.to_string());
    let gold = [s("PER", "Kevin"), s("PER", "Therese"), s("LOC", "Paris")];
    let pred = [s("PER", "Kevin"), s("PER", "Bob")];
    assert!((oracle_ner(&gold, &pred, &DEFAULTS) + 0.19761).abs() < 1e-5);
    let g: Group = ("attack".into(), "hit".into(), vec![s("Attacker", "rebels"), s("Place", "city")]);
    let p: Group = ("attack".into(), "hit".into(), vec![s("Attacker", "rebels")]);
    assert!((oracle_ee(&[g], &[p], &DEFAULTS) - 0.63333).abs() < 1e-5);
}
