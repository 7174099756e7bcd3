#![allow(dead_code)]

use sfr_kit::codec::{EeUnits, NerUnits, ReUnits, TaskSchema};

pub const RE_LABELS: [&str; 7] = [
    "conjunction",
    "feature of",
    "hyponym of",
    "used for",
    "part of",
    "compare",
    "evaluate for",
];

pub const NER_FULL: &str = r#"{
  "location": "",
  "person": "Kevin | Therese",
  "organization": ""
}"#;

pub const RE_FULL: &str = r#"{
  "conjunction": "",
  "feature of": "",
  "hyponym of": "",
  "used for": "surface, algorithm",
  "part of": "",
  "compare": "",
  "evaluate for": ""
}"#;

pub const RE_CONCISE: &str = r#"{"used for": "surface, algorithm"}"#;

pub const EE_FULL: &str = r#"{
"potential therapeutic event": "",
"adverse event": "developed: Subject: patient; Effect: a hemorrhagic lesion that progressed to toxic epidermal necrolysis, as well as grade 4 pancytopenia; Treatment: 5 days of treatment with IL-2; Treatment.Drug: IL-2; Treatment.Time_elapsed: After 5 days"
}"#;

pub const EE_CONCISE: &str = r#"{
"adverse event": "developed: Subject: patient; Effect: a hemorrhagic lesion that progressed to toxic epidermal necrolysis, as well as grade 4 pancytopenia; Treatment: 5 days of treatment with IL-2; Treatment.Drug: IL-2; Treatment.Time_elapsed: After 5 days"
}"#;

pub const EE_INPUT: &str = "After 5 days of treatment with IL-2, the patient developed a hemorrhagic lesion that progressed to toxic epidermal necrolysis, as well as grade 4 pancytopenia.";

pub const RE_CM: &str = r#"{
  "conjunction":"",
  "feature of":"",
  "hyponym of":"",
  "used for":"hand-crafted rules, basic syntactic knowledge",
  "part of":"",
  "compare":"",
  "evaluate for":""
}"#;

pub const RE_SA: &str = r#"{
  "used for":"hand-crafted rules, basic syntactic knowledge"
}"#;

pub fn ner_schema() -> TaskSchema {
    TaskSchema::ner(["location", "person", "organization"]).unwrap()
}

pub fn re_schema() -> TaskSchema {
    TaskSchema::re(RE_LABELS).unwrap()
}

pub fn ee_schema() -> TaskSchema {
    TaskSchema::ee(
        ["potential therapeutic event", "adverse event"],
        [
            "Subject",
            "Effect",
            "Treatment",
            "Treatment.Drug",
            "Treatment.Time_elapsed",
            "Treatment.Dosage",
        ],
    )
    .unwrap()
}

// Monolithic reference rewards, written against plain vectors.

fn uniq<T: Ord + Clone>(v: &[T]) -> Vec<T> {
    let mut v = v.to_vec();
    v.sort();
    v.dedup();
    v
}

fn common<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    a.iter().filter(|x| b.contains(x)).count()
}

fn maxf(n: usize) -> f64 {
    if n == 0 {
        1.0
    } else {
        n as f64
    }
}

pub struct Weights {
    pub ner: [f64; 5],
    pub re: [f64; 7],
    pub ee: [f64; 7],
}

pub const DEFAULTS: Weights = Weights {
    ner: [0.2, 0.8, 1.5, 0.6, 0.2],
    re: [0.05, 0.10, 0.10, 0.75, 1.3, 0.15, 0.25],
    ee: [0.05, 0.15, 0.8, 1.0, 1.0, 0.5, 0.3],
};

/// NER over `(type, mention)` pairs.
pub fn oracle_ner(gold: &[(String, String)], pred: &[(String, String)], w: &Weights) -> f64 {
    let [w_t, w_p, gamma, l_t, l_p] = w.ner;
    let g = uniq(gold);
    let p = uniq(pred);
    let gt = uniq(&g.iter().map(|x| x.0.clone()).collect::<Vec<_>>());
    let pt = uniq(&p.iter().map(|x| x.0.clone()).collect::<Vec<_>>());
    let it = common(&gt, &pt);
    let ip = common(&g, &p);
    let cov_t = it as f64 / maxf(gt.len());
    let f1_p = if g.len() + p.len() == 0 {
        1.0
    } else {
        2.0 * ip as f64 / (g.len() + p.len()) as f64
    };
    let d_t = (gt.len() + pt.len() - 2 * it) as f64 / maxf(gt.len());
    let d_p = (g.len() + p.len() - 2 * ip) as f64 / maxf(g.len());
    w_t * cov_t + w_p * f1_p.powf(gamma) - l_t * d_t - l_p * d_p
}

/// RE over `(type, head, tail)` triples.
pub fn oracle_re(gold: &[(String, String, String)], pred: &[(String, String, String)], w: &Weights) -> f64 {
    let [w_t, w_h, w_a, w_r, gamma, l_t, l_r] = w.re;
    let g = uniq(gold);
    let p = uniq(pred);
    let proj = |v: &[(String, String, String)], f: &dyn Fn(&(String, String, String)) -> String| {
        uniq(&v.iter().map(f).collect::<Vec<_>>())
    };
    let f1 = |a: &[String], b: &[String]| {
        if a.len() + b.len() == 0 {
            1.0
        } else {
            2.0 * common(a, b) as f64 / (a.len() + b.len()) as f64
        }
    };
    let jac = |a: usize, b: usize, i: usize| 1.0 - i as f64 / maxf(a + b - i);
    let key = |x: &(String, String, String)| format!("{}\u{0}{}\u{0}{}", x.0, x.1, x.2);
    let gt = proj(&g, &|x| x.0.clone());
    let pt = proj(&p, &|x| x.0.clone());
    let gh = proj(&g, &|x| format!("{}\u{0}{}", x.0, x.1));
    let ph = proj(&p, &|x| format!("{}\u{0}{}", x.0, x.1));
    let ga = proj(&g, &|x| format!("{}\u{0}{}", x.0, x.2));
    let pa = proj(&p, &|x| format!("{}\u{0}{}", x.0, x.2));
    let gr = proj(&g, &key);
    let pr = proj(&p, &key);
    let it = common(&gt, &pt);
    let ir = common(&gr, &pr);
    w_t * (it as f64 / maxf(gt.len()))
        + w_h * f1(&gh, &ph)
        + w_a * f1(&ga, &pa)
        + w_r * f1(&gr, &pr).powf(gamma)
        - l_t * jac(gt.len(), pt.len(), it)
        - l_r * jac(gr.len(), pr.len(), ir)
}

/// One trigger group: `(event type, trigger, role-argument pairs)`.
pub type Group = (String, String, Vec<(String, String)>);

pub fn oracle_ee(gold: &[Group], pred: &[Group], w: &Weights) -> f64 {
    let [w_e, w_tr, w_f, gamma, l_e, l_tr, l_f] = w.ee;
    let ge = uniq(&gold.iter().map(|g| g.0.clone()).collect::<Vec<_>>());
    let pe = uniq(&pred.iter().map(|g| g.0.clone()).collect::<Vec<_>>());
    let gtr = uniq(&gold.iter().map(|g| (g.0.clone(), g.1.clone())).collect::<Vec<_>>());
    let ptr = uniq(&pred.iter().map(|g| (g.0.clone(), g.1.clone())).collect::<Vec<_>>());

    // Greedy alignment per event type, scanning all remaining (gold, pred) pairs.
    let mut tp = 0usize;
    let mut n_gold = 0usize;
    let mut n_pred = 0usize;
    let mut types: Vec<String> = ge.iter().chain(pe.iter()).cloned().collect();
    types = uniq(&types);
    for t in &types {
        let gs: Vec<Vec<(String, String)>> = gold.iter().filter(|g| &g.0 == t).map(|g| uniq(&g.2)).collect();
        let ps: Vec<Vec<(String, String)>> = pred.iter().filter(|g| &g.0 == t).map(|g| uniq(&g.2)).collect();
        n_gold += gs.iter().map(Vec::len).sum::<usize>();
        n_pred += ps.iter().map(Vec::len).sum::<usize>();
        let mut gu = vec![false; gs.len()];
        let mut pu = vec![false; ps.len()];
        loop {
            let mut best = (0usize, usize::MAX, usize::MAX);
            for i in 0..gs.len() {
                for j in 0..ps.len() {
                    if gu[i] || pu[j] {
                        continue;
                    }
                    let o = common(&gs[i], &ps[j]);
                    if o > best.0 {
                        best = (o, i, j);
                    }
                }
            }
            if best.0 == 0 {
                break;
            }
            gu[best.1] = true;
            pu[best.2] = true;
            tp += best.0;
        }
    }
    let fp = n_pred - tp;
    let fn_ = n_gold - tp;
    let f_full = if tp + fp + fn_ == 0 {
        1.0
    } else {
        2.0 * tp as f64 / (2 * tp + fp + fn_) as f64
    };

    let d_e = (ge.len() + pe.len() - 2 * common(&ge, &pe)) as f64 / maxf(ge.len());
    let d_t = (gtr.len() + ptr.len() - 2 * common(&gtr, &ptr)) as f64 / maxf(gtr.len());
    let pen = if d_e > 0.0 {
        l_e * d_e
    } else if d_t > 0.0 {
        l_tr * d_t
    } else {
        l_f * (1.0 - f_full)
    };
    w_e * (common(&ge, &pe) as f64 / maxf(ge.len())) + w_tr * (common(&gtr, &ptr) as f64 / maxf(gtr.len()))
        + w_f * f_full.powf(gamma)
        - pen
}

// Enumerated universes.

/// Every subset of `items`, by bitmask.
pub fn subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    (0..1u32 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// 3 labels × 3 mentions.
pub fn ner_universe() -> Vec<(String, String)> {
    let mut v = Vec::new();
    for l in ["per", "loc", "org"] {
        for m in ["a", "b", "c"] {
            v.push((l.to_string(), m.to_string()));
        }
    }
    v
}

/// 2 labels × 2 heads × 2 tails.
pub fn re_universe() -> Vec<(String, String, String)> {
    let mut v = Vec::new();
    for l in ["r1", "r2"] {
        for h in ["x", "y"] {
            for t in ["u", "v"] {
                v.push((l.to_string(), h.to_string(), t.to_string()));
            }
        }
    }
    v
}

/// Up to 2 distinct groups; each over 2 event types × 2 triggers × subsets of 2 role-argument pairs.
pub fn ee_universe() -> Vec<Vec<Group>> {
    let pairs = [("A".to_string(), "p".to_string()), ("B".to_string(), "q".to_string())];
    let mut groups = Vec::new();
    for e in ["e1", "e2"] {
        for t in ["t1", "t2"] {
            for s in subsets(&pairs) {
                groups.push((e.to_string(), t.to_string(), s));
            }
        }
    }
    let mut out = vec![vec![]];
    for g in &groups {
        out.push(vec![g.clone()]);
    }
    for (i, a) in groups.iter().enumerate() {
        for (j, b) in groups.iter().enumerate() {
            if i != j {
                out.push(vec![a.clone(), b.clone()]);
            }
        }
    }
    out
}

pub fn ner_units_of(v: &[(String, String)]) -> NerUnits {
    NerUnits::from_pairs(v.iter().cloned())
}

pub fn re_units_of(v: &[(String, String, String)]) -> ReUnits {
    ReUnits::from_triples(v.iter().cloned())
}

pub fn ee_units_of(v: &[Group]) -> EeUnits {
    let mut u = EeUnits::default();
    for (e, t, pairs) in v {
        u.push_group(e.clone(), t.clone(), pairs.iter().cloned());
    }
    u
}

/// Checks every gold × pred pair of each universe; returns (cases, worst error).
pub fn oracle_sweep() -> (usize, f64) {
    use rayon::prelude::*;
    use sfr_kit::reward::{reward_ee, reward_ner, reward_re};
    use sfr_kit::SfrConfig;

    let cfg = SfrConfig::default();
    let worst = |a: f64, b: f64| a.max(b);

    let ner: Vec<Vec<(String, String)>> = subsets(&ner_universe());
    let ner_units: Vec<NerUnits> = ner.iter().map(|v| ner_units_of(v)).collect();
    let e_ner = (0..ner.len())
        .into_par_iter()
        .map(|i| {
            (0..ner.len())
                .map(|j| (reward_ner(&ner_units[i], &ner_units[j], &cfg).total - oracle_ner(&ner[i], &ner[j], &DEFAULTS)).abs())
                .fold(0.0, worst)
        })
        .reduce(|| 0.0, worst);

    let re: Vec<Vec<(String, String, String)>> = subsets(&re_universe());
    let re_units: Vec<ReUnits> = re.iter().map(|v| re_units_of(v)).collect();
    let e_re = (0..re.len())
        .into_par_iter()
        .map(|i| {
            (0..re.len())
                .map(|j| (reward_re(&re_units[i], &re_units[j], &cfg).total - oracle_re(&re[i], &re[j], &DEFAULTS)).abs())
                .fold(0.0, worst)
        })
        .reduce(|| 0.0, worst);

    let ee = ee_universe();
    let ee_units: Vec<EeUnits> = ee.iter().map(|v| ee_units_of(v)).collect();
    let e_ee = (0..ee.len())
        .into_par_iter()
        .map(|i| {
            (0..ee.len())
                .map(|j| (reward_ee(&ee_units[i], &ee_units[j], &cfg).total - oracle_ee(&ee[i], &ee[j], &DEFAULTS)).abs())
                .fold(0.0, worst)
        })
        .reduce(|| 0.0, worst);

    let cases = ner.len().pow(2) + re.len().pow(2) + ee.len().pow(2);
    (cases, e_ner.max(e_re).max(e_ee))
}
