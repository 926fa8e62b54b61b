//! Exhaustive enumeration of set partitions, restricted by size where needed.

use crate::error::PartitionError;
use crate::partition::{ClusterSizeSpec, Partition};

/// Largest `n` accepted by the exhaustive enumerators (`Bell(12) = 4_213_597`).
pub const ENUMERATION_GUARD: usize = 12;

fn guard(n: usize) -> Result<(), PartitionError> {
    if n == 0 {
        return Err(PartitionError::Empty);
    }
    if n > ENUMERATION_GUARD {
        return Err(PartitionError::EnumerationGuard {
            n,
            max: ENUMERATION_GUARD,
        });
    }
    Ok(())
}

/// All `Bell(n)` partitions of `0..n`, each once, as restricted growth
/// strings in lexicographic order.
pub fn enumerate_partitions(n: usize) -> Result<Partitions, PartitionError> {
    guard(n)?;
    Ok(Partitions {
        labels: vec![0; n],
        prefix_max: vec![0; n],
        done: false,
    })
}

/// Lazy restricted-growth-string iterator. Restart by calling
/// [`enumerate_partitions`] again.
#[derive(Clone, Debug)]
pub struct Partitions {
    labels: Vec<u32>,
    // prefix_max[i] = max(labels[0..=i])
    prefix_max: Vec<u32>,
    done: bool,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let current = Partition::from_canonical(self.labels.clone());
        let n = self.labels.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.labels[i] <= self.prefix_max[i - 1] {
                self.labels[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.labels[i]);
                for j in i + 1..n {
                    self.labels[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                break;
            }
        }
        Some(current)
    }
}

/// All distinct partitions whose multiset of cluster sizes equals `spec`.
///
/// The cluster holding the smallest unassigned element is chosen first, with
/// each distinct remaining size tried once, so no partition is produced twice.
pub fn enumerate_with_sizes(spec: &ClusterSizeSpec) -> Result<Vec<Partition>, PartitionError> {
    let n = spec.n();
    guard(n)?;
    let mut remaining: Vec<(usize, usize)> = Vec::new();
    for &s in spec.sizes() {
        match remaining.last_mut() {
            Some((size, count)) if *size == s => *count += 1,
            _ => remaining.push((s, 1)),
        }
    }
    let mut out = Vec::new();
    let mut labels = vec![u32::MAX; n];
    fill(&mut labels, 0, &mut remaining, &mut out);
    Ok(out)
}

fn fill(
    labels: &mut Vec<u32>,
    next_label: u32,
    remaining: &mut Vec<(usize, usize)>,
    out: &mut Vec<Partition>,
) {
    let Some(first) = labels.iter().position(|&l| l == u32::MAX) else {
        out.push(Partition::from_canonical(labels.clone()));
        return;
    };
    let free: Vec<usize> = (first + 1..labels.len())
        .filter(|&e| labels[e] == u32::MAX)
        .collect();
    for slot in 0..remaining.len() {
        let (size, count) = remaining[slot];
        if count == 0 || size - 1 > free.len() {
            continue;
        }
        remaining[slot].1 -= 1;
        labels[first] = next_label;
        for_each_combination(free.len(), size - 1, &mut |chosen| {
            for &c in chosen {
                labels[free[c]] = next_label;
            }
            fill(labels, next_label + 1, remaining, out);
            for &c in chosen {
                labels[free[c]] = u32::MAX;
            }
        });
        labels[first] = u32::MAX;
        remaining[slot].1 += 1;
    }
}

/// Calls `f` with every `r`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_combination(n: usize, r: usize, f: &mut impl FnMut(&[usize])) {
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        f(&idx);
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - r + i {
                idx[i] += 1;
                for j in i + 1..r {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Every cluster-size specification of `n` elements (integer partitions of
/// `n`), largest parts first.
pub fn size_specs(n: usize) -> Vec<ClusterSizeSpec> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<ClusterSizeSpec>) {
        if rest == 0 {
            out.push(ClusterSizeSpec::new(cur.clone()).expect("positive parts"));
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// Bell numbers via the Bell triangle.
pub fn bell_number(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &v in &row {
            let last = *next.last().unwrap();
            next.push(last + v);
        }
        row = next;
    }
    row[0]
}

/// Number of distinct partitions with the given size multiset:
/// `n! / (prod s_i! * prod m_s!)` where `m_s` counts clusters of size `s`.
pub fn count_with_sizes(spec: &ClusterSizeSpec) -> u128 {
    let fact = |x: usize| (1..=x as u128).product::<u128>();
    let mut denom: u128 = spec.sizes().iter().map(|&s| fact(s)).product();
    let mut i = 0;
    let sizes = spec.sizes();
    while i < sizes.len() {
        let j = sizes[i..].iter().take_while(|&&s| s == sizes[i]).count();
        denom *= fact(j);
        i += j;
    }
    fact(spec.n()) / denom
}
