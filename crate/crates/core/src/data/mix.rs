//! Fixed-ratio phase mixing and streamlined subset sampling.
//!
//! All randomness comes from one ChaCha8 stream seeded with `seed` via
//! `SeedableRng::seed_from_u64`, consumed in a fixed order: per-pool index
//! sampling in pool order, then one Fisher-Yates shuffle of the result.

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::pool::{DatasetPool, MixedItem, Provenance};
use super::streamline::streamline;
use super::DataError;

pub struct MixSpec<'a> {
    pub pools: Vec<(&'a DatasetPool, f64)>,
    pub total: usize,
    pub seed: u64,
}

/// Splits `total` in proportion to `weights` by largest remainder.
///
/// Each share starts at `floor(total · w / Σw)`; the leftover items go to the
/// largest fractional parts, earlier pools first on ties. The result always
/// sums to `total`.
pub fn allocate(weights: &[f64], total: usize) -> Result<Vec<usize>, DataError> {
    if weights.is_empty() {
        return Err(DataError::InvalidRatio("no weights".into()));
    }
    if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
        return Err(DataError::InvalidRatio(format!("weight {w} is not positive")));
    }
    let sum: f64 = weights.iter().sum();
    let exact: Vec<f64> = weights.iter().map(|w| total as f64 * w / sum).collect();
    let mut shares: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
    let assigned: usize = shares.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = exact[a] - exact[a].floor();
        let fb = exact[b] - exact[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for &i in order.iter().cycle().take(total.saturating_sub(assigned)) {
        shares[i] += 1;
    }
    Ok(shares)
}

/// Parses a ratio such as `2:8` or `3:3:4`.
pub fn parse_ratio(text: &str) -> Result<Vec<f64>, DataError> {
    text.split(':')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| DataError::InvalidRatio(format!("`{text}` is not of the form a:b[:c...]")))
        })
        .collect()
}

fn draw(pool: &DatasetPool, amount: usize, rng: &mut ChaCha8Rng) -> Result<Vec<MixedItem>, DataError> {
    if amount > pool.len() {
        return Err(DataError::PoolTooSmall {
            pool: pool.name.clone(),
            requested: amount,
            available: pool.len(),
        });
    }
    let mut picked = index::sample(rng, pool.len(), amount).into_vec();
    picked.sort_unstable();
    Ok(picked
        .into_iter()
        .map(|i| MixedItem {
            input: pool.items[i].input.clone(),
            target: pool.items[i].target.clone(),
            provenance: Provenance {
                pool: pool.name.clone(),
                task: pool.task(),
                index: i,
            },
        })
        .collect())
}

/// Draws each pool's ratio share without replacement and shuffles the union.
pub fn mix_phases(spec: &MixSpec<'_>) -> Result<Vec<MixedItem>, DataError> {
    if spec.total < spec.pools.len() {
        return Err(DataError::Infeasible(format!(
            "total {} is smaller than the number of pools {}",
            spec.total,
            spec.pools.len()
        )));
    }
    let weights: Vec<f64> = spec.pools.iter().map(|(_, w)| *w).collect();
    let shares = allocate(&weights, spec.total)?;
    for ((pool, _), &share) in spec.pools.iter().zip(&shares) {
        if share > pool.len() {
            return Err(DataError::Infeasible(format!(
                "pool `{}` has {} items but its share is {share}",
                pool.name,
                pool.len()
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut items = Vec::with_capacity(spec.total);
    for ((pool, _), &share) in spec.pools.iter().zip(&shares) {
        items.extend(draw(pool, share, &mut rng)?);
    }
    items.shuffle(&mut rng);
    Ok(items)
}

/// Samples `n_re` RE and `n_ee` EE items and streamlines their targets.
pub fn sample_sa(
    re_pool: &DatasetPool,
    ee_pool: &DatasetPool,
    n_re: usize,
    n_ee: usize,
    seed: u64,
) -> Result<Vec<MixedItem>, DataError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut items = Vec::with_capacity(n_re + n_ee);
    for (pool, n) in [(re_pool, n_re), (ee_pool, n_ee)] {
        for mut item in draw(pool, n, &mut rng)? {
            item.target = streamline(&item.target, &pool.schema).map_err(|e| DataError::StreamlineFailed {
                pool: pool.name.clone(),
                index: item.provenance.index,
                diagnosis: e.to_string(),
            })?;
            items.push(item);
        }
    }
    items.shuffle(&mut rng);
    Ok(items)
}
