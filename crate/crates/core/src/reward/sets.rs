//! Set primitives shared by the rewards: coverage, F1, normalized symmetric
//! difference and Jaccard distance. All take the gold set first.

use std::collections::BTreeSet;

fn intersection<T: Ord>(gold: &BTreeSet<T>, pred: &BTreeSet<T>) -> usize {
    gold.intersection(pred).count()
}

/// `|gold ∩ pred| / max(1, |gold|)`.
pub fn cov<T: Ord>(gold: &BTreeSet<T>, pred: &BTreeSet<T>) -> f64 {
    intersection(gold, pred) as f64 / gold.len().max(1) as f64
}

/// `2|gold ∩ pred| / (|gold| + |pred|)`, with `empty_empty` when both sets are empty.
pub fn f1<T: Ord>(gold: &BTreeSet<T>, pred: &BTreeSet<T>, empty_empty: f64) -> f64 {
    let denom = gold.len() + pred.len();
    if denom == 0 {
        return empty_empty;
    }
    2.0 * intersection(gold, pred) as f64 / denom as f64
}

/// `|gold △ pred| / max(1, |gold|)`. Unbounded above.
pub fn sym_diff_norm<T: Ord>(gold: &BTreeSet<T>, pred: &BTreeSet<T>) -> f64 {
    gold.symmetric_difference(pred).count() as f64 / gold.len().max(1) as f64
}

/// `1 − |gold ∩ pred| / max(1, |gold ∪ pred|)`. Both empty gives 1.
pub fn jaccard_dist<T: Ord>(gold: &BTreeSet<T>, pred: &BTreeSet<T>) -> f64 {
    let inter = intersection(gold, pred);
    let union = gold.len() + pred.len() - inter;
    1.0 - inter as f64 / union.max(1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn coverage() {
        assert_eq!(cov(&set(&["a", "b"]), &set(&["a"])), 0.5);
        assert_eq!(cov(&set(&[]), &set(&["a"])), 0.0);
        assert_eq!(cov(&set(&["a", "b"]), &set(&["b", "a"])), 1.0);
    }

    #[test]
    fn f1_cases() {
        assert!((f1(&set(&["x"]), &set(&["x", "y"]), 1.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(f1(&set(&[]), &set(&[]), 1.0), 1.0);
        assert_eq!(f1(&set(&[]), &set(&[]), 0.0), 0.0);
        assert_eq!(f1(&set(&["x"]), &set(&[]), 1.0), 0.0);
    }

    #[test]
    fn symmetric_difference() {
        assert_eq!(sym_diff_norm(&set(&["a", "b"]), &set(&["a", "c"])), 1.0);
        assert_eq!(sym_diff_norm(&set(&["a"]), &set(&["a"])), 0.0);
        assert_eq!(sym_diff_norm(&set(&[]), &set(&["a", "b", "c"])), 3.0);
    }

    #[test]
    fn jaccard() {
        assert_eq!(jaccard_dist(&set(&["t1"]), &set(&["t1", "t2"])), 0.5);
        assert_eq!(jaccard_dist(&set(&["t1"]), &set(&["t1"])), 0.0);
        assert_eq!(jaccard_dist(&set(&[]), &set(&[])), 1.0);
    }
}
