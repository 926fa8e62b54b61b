//! Search for a small set of triplets on which every orderable pair of
//! indices disagrees at least once.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::IndexError;
use crate::indices::{Evaluator, IndexId};
use crate::partition::Partition;
use crate::stats::SeededGenerator;

use super::triplets::{analyze_triplet, PairVerdict};

/// Largest target set: the pair mask is a `u128`.
pub const MAX_TARGETS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoverBudget {
    pub n_min: usize,
    pub n_max: usize,
    /// Triplets drawn per round.
    pub batch: usize,
    pub max_rounds: usize,
    pub max_size: usize,
    pub seed: u64,
}

impl Default for CoverBudget {
    fn default() -> Self {
        CoverBudget {
            n_min: 3,
            n_max: 8,
            batch: 20_000,
            max_rounds: 25,
            max_size: 4,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverTriplet {
    pub a: Partition,
    pub b1: Partition,
    pub b2: Partition,
    /// Index pairs this triplet makes inconsistent.
    pub pairs: Vec<(IndexId, IndexId)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverResult {
    pub targets: Vec<IndexId>,
    pub triplets: Vec<CoverTriplet>,
    /// Pairs sharing a preference order by construction; never separable.
    pub unorderable: Vec<(IndexId, IndexId)>,
    /// Orderable pairs no emitted triplet covers.
    pub uncovered: Vec<(IndexId, IndexId)>,
    pub examined: usize,
    pub complete: bool,
}

fn pairs_of(ids: &[IndexId]) -> Vec<(usize, usize)> {
    (0..ids.len())
        .flat_map(|i| (i + 1..ids.len()).map(move |j| (i, j)))
        .collect()
}

/// Random partition of `0..n`: cluster count uniform in `1..=n`, labels
/// uniform among the clusters.
fn random_partition(n: usize, rng: &mut impl Rng) -> Partition {
    let k = rng.gen_range(1..=n);
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    Partition::from_labels(&labels).expect("n > 0")
}

fn inconsistency_mask(
    ids: &[IndexId],
    pairs: &[(usize, usize)],
    a: &Partition,
    b1: &Partition,
    b2: &Partition,
    e: &Evaluator,
) -> Result<u128, IndexError> {
    let r = analyze_triplet(ids, a, b1, b2, e)?;
    let mut verdict = HashMap::with_capacity(r.verdicts.len());
    for (x, y, v) in &r.verdicts {
        verdict.insert((*x, *y), *v);
    }
    let mut mask = 0u128;
    for (bit, &(i, j)) in pairs.iter().enumerate() {
        if verdict[&(ids[i], ids[j])] == PairVerdict::Inconsistent {
            mask |= 1 << bit;
        }
    }
    Ok(mask)
}

/// Exact search for at most `depth` masks covering `need`. Branches on the
/// uncovered bit with the fewest candidate masks.
fn exact_cover(masks: &[u128], need: u128, depth: usize, chosen: &mut Vec<usize>) -> bool {
    if need == 0 {
        return true;
    }
    if depth == 0 {
        return false;
    }
    let best = masks.iter().map(|m| (m & need).count_ones()).max().unwrap_or(0);
    if (best as usize) * depth < need.count_ones() as usize {
        return false;
    }
    let mut pivot = None;
    let mut fewest = usize::MAX;
    let mut bits = need;
    while bits != 0 {
        let b = bits.trailing_zeros();
        bits &= bits - 1;
        let c = masks.iter().filter(|m| *m >> b & 1 == 1).count();
        if c < fewest {
            fewest = c;
            pivot = Some(b);
        }
    }
    let pivot = pivot.expect("need is nonzero");
    let mut options: Vec<usize> = (0..masks.len())
        .filter(|&i| masks[i] >> pivot & 1 == 1)
        .collect();
    options.sort_by_key(|&i| std::cmp::Reverse((masks[i] & need).count_ones()));
    for i in options {
        chosen.push(i);
        if exact_cover(masks, need & !masks[i], depth - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Drops masks contained in another mask (keeps one copy of duplicates).
fn maximal(mut masks: Vec<u128>) -> Vec<u128> {
    masks.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
    masks.dedup();
    let mut out: Vec<u128> = Vec::new();
    for m in masks {
        if !out.iter().any(|o| m & !o == 0) {
            out.push(m);
        }
    }
    out
}

/// Greedy choice of at most `limit` masks by newly covered bits.
fn greedy(masks: &[u128], need: u128, limit: usize) -> Vec<usize> {
    let mut left = need;
    let mut out = Vec::new();
    while left != 0 && out.len() < limit {
        let Some((i, gain)) = masks
            .iter()
            .enumerate()
            .map(|(i, m)| (i, (m & left).count_ones()))
            .max_by_key(|&(i, g)| (g, std::cmp::Reverse(i)))
        else {
            break;
        };
        if gain == 0 {
            break;
        }
        out.push(i);
        left &= !masks[i];
    }
    out
}

/// Samples random triplets with `n_min <= n <= n_max` in rounds and looks for
/// a cover of at most `max_size` triplets. Pairs of indices in the same
/// preference class are reported as unorderable. Deterministic in the seed.
pub fn find_inconsistency_cover(
    targets: &[IndexId],
    budget: &CoverBudget,
    e: &Evaluator,
) -> Result<CoverResult, IndexError> {
    if targets.len() > MAX_TARGETS {
        return Err(IndexError::OutOfRange(format!(
            "at most {MAX_TARGETS} target indices"
        )));
    }
    if budget.n_min < 2 || budget.n_max < budget.n_min {
        return Err(IndexError::OutOfRange(format!(
            "invalid size range {}..={}",
            budget.n_min, budget.n_max
        )));
    }
    let pairs = pairs_of(targets);
    let class = |i: usize| targets[i].descriptor().preference_class;
    let mut need = 0u128;
    let mut unorderable = Vec::new();
    for (bit, &(i, j)) in pairs.iter().enumerate() {
        if class(i) == class(j) {
            unorderable.push((targets[i], targets[j]));
        } else {
            need |= 1 << bit;
        }
    }

    let g = SeededGenerator::new(budget.seed, 0x636f);
    // representative triplet for each distinct mask
    let mut found: HashMap<u128, (Partition, Partition, Partition)> = HashMap::new();
    let mut examined = 0;
    let mut chosen = Vec::new();
    for round in 0..budget.max_rounds {
        let batch: Vec<(u128, (Partition, Partition, Partition))> = (0..budget.batch as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = g.substream(&[round as u64, i]);
                let n = rng.gen_range(budget.n_min..=budget.n_max);
                let a = random_partition(n, &mut rng);
                let b1 = random_partition(n, &mut rng);
                let b2 = random_partition(n, &mut rng);
                let m = inconsistency_mask(targets, &pairs, &a, &b1, &b2, e)? & need;
                Ok((m, (a, b1, b2)))
            })
            .collect::<Result<_, IndexError>>()?;
        examined += batch.len();
        for (m, t) in batch {
            if m != 0 {
                found.entry(m).or_insert(t);
            }
        }
        let masks = maximal(found.keys().copied().collect());
        chosen.clear();
        if exact_cover(&masks, need, budget.max_size, &mut chosen) {
            return Ok(build(targets, &pairs, need, &masks, &chosen, &found, unorderable, examined));
        }
        if round + 1 == budget.max_rounds {
            let partial = greedy(&masks, need, budget.max_size);
            return Ok(build(targets, &pairs, need, &masks, &partial, &found, unorderable, examined));
        }
    }
    Ok(build(targets, &pairs, need, &[], &[], &found, unorderable, examined))
}

#[allow(clippy::too_many_arguments)]
fn build(
    targets: &[IndexId],
    pairs: &[(usize, usize)],
    need: u128,
    masks: &[u128],
    chosen: &[usize],
    found: &HashMap<u128, (Partition, Partition, Partition)>,
    unorderable: Vec<(IndexId, IndexId)>,
    examined: usize,
) -> CoverResult {
    let decode = |m: u128| -> Vec<(IndexId, IndexId)> {
        pairs
            .iter()
            .enumerate()
            .filter(|(bit, _)| m >> bit & 1 == 1)
            .map(|(_, &(i, j))| (targets[i], targets[j]))
            .collect()
    };
    let mut covered = 0u128;
    let triplets = chosen
        .iter()
        .map(|&i| {
            let m = masks[i];
            covered |= m;
            let (a, b1, b2) = found[&m].clone();
            CoverTriplet {
                a,
                b1,
                b2,
                pairs: decode(m),
            }
        })
        .collect();
    let left = need & !covered;
    CoverResult {
        targets: targets.to_vec(),
        triplets,
        unorderable,
        uncovered: decode(left),
        examined,
        complete: left == 0,
    }
}

/// Re-scores every emitted triplet and confirms each claimed pair is
/// inconsistent and that the claimed pairs cover every orderable pair when
/// the result says it is complete.
pub fn verify_cover(c: &CoverResult, e: &Evaluator) -> Result<bool, IndexError> {
    let mut seen = std::collections::HashSet::new();
    for t in &c.triplets {
        let r = analyze_triplet(&c.targets, &t.a, &t.b1, &t.b2, e)?;
        for p in &t.pairs {
            let v = r
                .verdicts
                .iter()
                .find(|(x, y, _)| (*x, *y) == *p)
                .map(|v| v.2);
            if v != Some(PairVerdict::Inconsistent) {
                return Ok(false);
            }
            seen.insert(*p);
        }
    }
    let all = pairs_of(&c.targets).len();
    let uncovered_ok = c.uncovered.iter().all(|p| !seen.contains(p));
    Ok(uncovered_ok && (!c.complete || seen.len() + c.unorderable.len() == all))
}
