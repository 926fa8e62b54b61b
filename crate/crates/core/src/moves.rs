//! Perfect splits, perfect merges and consistent improvements of a candidate
//! partition with respect to a reference.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::PartitionError;
use crate::partition::{check_same_n, Partition};

/// All partitions obtained by splitting one cluster of `b` into two non-empty
/// parts without separating any two elements of a common cluster of `a`.
///
/// The number of results grows as `2^(blocks - 1)` in the number of reference
/// clusters meeting a candidate cluster; intended for small `n`.
pub fn perfect_splits(b: &Partition, a: &Partition) -> Result<Vec<Partition>, PartitionError> {
    check_same_n(a, b)?;
    let mut out = BTreeSet::new();
    for members in b.clusters() {
        // blocks: members of this cluster grouped by reference label
        let mut block_of: Vec<(u32, Vec<usize>)> = Vec::new();
        for &e in &members {
            let la = a.label(e);
            match block_of.iter_mut().find(|(l, _)| *l == la) {
                Some((_, v)) => v.push(e),
                None => block_of.push((la, vec![e])),
            }
        }
        let blocks = block_of.len();
        if blocks < 2 {
            continue;
        }
        let fresh = b.k() as u32;
        // masks with the first block on the "keep" side enumerate each
        // unordered bipartition once
        for mask in 1u64..(1u64 << (blocks - 1)) {
            let mut labels = b.labels().to_vec();
            for (bi, (_, elems)) in block_of.iter().enumerate().skip(1) {
                if mask >> (bi - 1) & 1 == 1 {
                    for &e in elems {
                        labels[e] = fresh;
                    }
                }
            }
            out.insert(Partition::from_labels(&labels)?);
        }
    }
    Ok(out.into_iter().collect())
}

/// All partitions obtained by merging two clusters of `b` that lie inside a
/// single cluster of `a`.
pub fn perfect_merges(b: &Partition, a: &Partition) -> Result<Vec<Partition>, PartitionError> {
    check_same_n(a, b)?;
    let purity = cluster_purity(b, a);
    let mut out = BTreeSet::new();
    for j1 in 0..b.k() {
        for j2 in j1 + 1..b.k() {
            if let (Some(x), Some(y)) = (purity[j1], purity[j2]) {
                if x == y {
                    let labels: Vec<u32> = b
                        .labels()
                        .iter()
                        .map(|&l| if l as usize == j2 { j1 as u32 } else { l })
                        .collect();
                    out.insert(Partition::from_labels(&labels)?);
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Perfect splits followed by perfect merges, without duplicates.
pub fn perfect_moves(b: &Partition, a: &Partition) -> Result<Vec<Partition>, PartitionError> {
    let mut v = perfect_splits(b, a)?;
    v.extend(perfect_merges(b, a)?);
    Ok(v)
}

/// For each cluster of `b`, the reference label shared by all its members.
fn cluster_purity(b: &Partition, a: &Partition) -> Vec<Option<u32>> {
    let mut purity: Vec<Option<Option<u32>>> = vec![None; b.k()];
    for e in 0..b.n() {
        let j = b.label(e) as usize;
        let la = a.label(e);
        purity[j] = match purity[j] {
            None => Some(Some(la)),
            Some(Some(x)) if x == la => Some(Some(x)),
            _ => Some(None),
        };
    }
    purity.into_iter().map(|p| p.flatten()).collect()
}

/// `b2 != b` and every pair on which `a` and `b` agree is also a pair on
/// which `a` and `b2` agree.
pub fn is_consistent_improvement(
    a: &Partition,
    b: &Partition,
    b2: &Partition,
) -> Result<bool, PartitionError> {
    check_same_n(a, b)?;
    check_same_n(a, b2)?;
    if b == b2 {
        return Ok(false);
    }
    let n = a.n();
    for u in 0..n {
        for v in u + 1..n {
            let in_a = a.label(u) == a.label(v);
            let agree_before = in_a == (b.label(u) == b.label(v));
            let agree_after = in_a == (b2.label(u) == b2.label(v));
            if agree_before && !agree_after {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every partition reachable from `b` by one or more perfect moves w.r.t. `a`.
pub fn reachable_by_perfect_moves(
    a: &Partition,
    b: &Partition,
) -> Result<HashSet<Partition>, PartitionError> {
    check_same_n(a, b)?;
    let mut seen: HashSet<Partition> = HashSet::new();
    let mut queue = VecDeque::new();
    queue.push_back(b.clone());
    while let Some(cur) = queue.pop_front() {
        for next in perfect_moves(&cur, a)? {
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}
