//! Partitions of `0..n` in canonical form, cluster-size specifications and
//! the plain-text partition format.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::PartitionError;

/// A partition of the elements `0..n` into non-empty clusters.
///
/// Labels are kept in canonical form: clusters are numbered `0, 1, ...` in
/// order of their first element, so two label sequences describing the same
/// set partition compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    labels: Vec<u32>,
    sizes: Vec<usize>,
}

impl Partition {
    /// Builds a canonical partition from arbitrary hashable labels.
    pub fn from_labels<T: Hash + Eq>(labels: &[T]) -> Result<Self, PartitionError> {
        if labels.is_empty() {
            return Err(PartitionError::Empty);
        }
        let mut ids: HashMap<&T, u32> = HashMap::new();
        let mut canonical = Vec::with_capacity(labels.len());
        let mut sizes = Vec::new();
        for label in labels {
            let next = ids.len() as u32;
            let id = *ids.entry(label).or_insert(next);
            if id as usize == sizes.len() {
                sizes.push(0);
            }
            sizes[id as usize] += 1;
            canonical.push(id);
        }
        Ok(Partition {
            labels: canonical,
            sizes,
        })
    }

    /// Builds a partition from an explicit list of clusters covering `0..n`.
    pub fn from_clusters(clusters: &[Vec<usize>]) -> Result<Self, PartitionError> {
        let n: usize = clusters.iter().map(Vec::len).sum();
        if n == 0 {
            return Err(PartitionError::Empty);
        }
        let mut labels = vec![usize::MAX; n];
        for (c, members) in clusters.iter().enumerate() {
            if members.is_empty() {
                return Err(PartitionError::EmptyCluster);
            }
            for &e in members {
                if e >= n || labels[e] != usize::MAX {
                    return Err(PartitionError::NotACover { element: e });
                }
                labels[e] = c;
            }
        }
        Self::from_labels(&labels)
    }

    /// Internal constructor for label vectors already in canonical form.
    pub(crate) fn from_canonical(labels: Vec<u32>) -> Self {
        let k = labels.iter().max().map_or(0, |&m| m as usize + 1);
        let mut sizes = vec![0; k];
        for &l in &labels {
            sizes[l as usize] += 1;
        }
        Partition { labels, sizes }
    }

    /// The partition of `n` elements into one cluster.
    pub fn single_cluster(n: usize) -> Self {
        Self::from_canonical(vec![0; n])
    }

    /// The partition of `n` elements into singletons.
    pub fn singletons(n: usize) -> Self {
        Self::from_canonical((0..n as u32).collect())
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of clusters.
    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, element: usize) -> u32 {
        self.labels[element]
    }

    /// Cluster sizes indexed by canonical label.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// `k == 1` or `k == n`.
    pub fn is_trivial(&self) -> bool {
        self.k() == 1 || self.k() == self.n()
    }

    /// Members of every cluster, in label order.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (e, &l) in self.labels.iter().enumerate() {
            out[l as usize].push(e);
        }
        out
    }

    /// Multiset of cluster sizes.
    pub fn size_spec(&self) -> ClusterSizeSpec {
        ClusterSizeSpec::new(self.sizes.clone()).expect("partition sizes are positive")
    }

    /// Number of intra-cluster pairs, `sum_i C(|A_i|, 2)`.
    pub fn intra_pairs(&self) -> u64 {
        self.sizes.iter().map(|&s| choose2(s as u64)).sum()
    }

    /// Applies a permutation of element identities: element `e` of the result
    /// carries the cluster of `perm[e]` in `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let labels: Vec<u32> = perm.iter().map(|&p| self.labels[p]).collect();
        Self::from_labels(&labels).expect("non-empty")
    }

    /// Common refinement: clusters are the non-empty intersections `A_i ∩ B_j`.
    pub fn meet(&self, other: &Partition) -> Result<Partition, PartitionError> {
        check_same_n(self, other)?;
        let pairs: Vec<(u32, u32)> = self
            .labels
            .iter()
            .zip(&other.labels)
            .map(|(&a, &b)| (a, b))
            .collect();
        Self::from_labels(&pairs)
    }

    /// Serializes in the one-label-per-line text format.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.n() * 3);
        for l in &self.labels {
            s.push_str(&l.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the partition text format: one label per line (blank lines and
    /// `#` comments ignored), or a single line of comma-separated labels.
    pub fn parse_text(text: &str) -> Result<Partition, PartitionError> {
        let lines: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let labels: Vec<&str> = if lines.len() == 1 && lines[0].contains(',') {
            lines[0].split(',').map(str::trim).collect()
        } else {
            lines
        };
        if let Some(pos) = labels.iter().position(|l| l.is_empty()) {
            return Err(PartitionError::Parse(format!("empty label at position {pos}")));
        }
        Self::from_labels(&labels)
    }
}

impl fmt::Display for Partition {
    /// Set notation, e.g. `{{0,1},{2},{3}}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.clusters().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, e) in c.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn check_same_n(a: &Partition, b: &Partition) -> Result<(), PartitionError> {
    if a.n() != b.n() {
        return Err(PartitionError::SizeMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(())
}

pub(crate) fn choose2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

/// Multiset of cluster sizes, stored in non-increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClusterSizeSpec {
    sizes: Vec<usize>,
}

impl ClusterSizeSpec {
    pub fn new(mut sizes: Vec<usize>) -> Result<Self, PartitionError> {
        if sizes.is_empty() {
            return Err(PartitionError::Empty);
        }
        if sizes.contains(&0) {
            return Err(PartitionError::EmptyCluster);
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Ok(ClusterSizeSpec { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn intra_pairs(&self) -> u64 {
        self.sizes.iter().map(|&s| choose2(s as u64)).sum()
    }

    /// A fixed partition with these sizes: contiguous blocks, largest first.
    pub fn block_partition(&self) -> Partition {
        let mut labels = Vec::with_capacity(self.n());
        for (c, &s) in self.sizes.iter().enumerate() {
            labels.extend(std::iter::repeat(c as u32).take(s));
        }
        Partition::from_canonical(labels)
    }

    /// Balanced sizes `BS(n, k)`: `n - k*floor(n/k)` clusters of size
    /// `ceil(n/k)`, the rest of size `floor(n/k)`.
    pub fn balanced(n: usize, k: usize) -> Result<Self, PartitionError> {
        if k == 0 || k > n {
            return Err(PartitionError::ClusterCountOutOfRange { n, k });
        }
        let small = n / k;
        let big_count = n - k * small;
        let mut sizes = vec![small + 1; big_count];
        sizes.extend(std::iter::repeat(small).take(k - big_count));
        Self::new(sizes)
    }
}

impl fmt::Display for ClusterSizeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.sizes.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}
