//! Contingency tables, pair counts and partition entropies.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::PartitionError;
use crate::partition::{check_same_n, choose2, Partition};

/// Dense counting is used while `k_A * k_B` stays below this many cells.
const DENSE_CELLS: usize = 1 << 16;

/// Sparse overlap counts `n_ij = |A_i ∩ B_j|` with marginals.
///
/// Entries are kept sorted by `(i, j)` so every sum over the table is
/// evaluated in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContingencyTable {
    entries: Vec<((u32, u32), usize)>,
    row_sums: Vec<usize>,
    col_sums: Vec<usize>,
    n: usize,
}

impl ContingencyTable {
    pub fn new(a: &Partition, b: &Partition) -> Result<Self, PartitionError> {
        check_same_n(a, b)?;
        let (ka, kb) = (a.k(), b.k());
        let entries = if ka * kb <= DENSE_CELLS {
            let mut cells = vec![0usize; ka * kb];
            for (&i, &j) in a.labels().iter().zip(b.labels()) {
                cells[i as usize * kb + j as usize] += 1;
            }
            cells
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(idx, &c)| (((idx / kb) as u32, (idx % kb) as u32), c))
                .collect()
        } else {
            let mut map: HashMap<(u32, u32), usize> = HashMap::with_capacity(a.n());
            for (&i, &j) in a.labels().iter().zip(b.labels()) {
                *map.entry((i, j)).or_insert(0) += 1;
            }
            let mut v: Vec<_> = map.into_iter().collect();
            v.sort_unstable();
            v
        };
        Ok(ContingencyTable {
            entries,
            row_sums: a.sizes().to_vec(),
            col_sums: b.sizes().to_vec(),
            n: a.n(),
        })
    }

    /// Non-zero cells `((i, j), n_ij)` in row-major order.
    pub fn entries(&self) -> &[((u32, u32), usize)] {
        &self.entries
    }

    pub fn get(&self, i: u32, j: u32) -> usize {
        self.entries
            .binary_search_by_key(&(i, j), |&(key, _)| key)
            .map_or(0, |pos| self.entries[pos].1)
    }

    pub fn row_sums(&self) -> &[usize] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[usize] {
        &self.col_sums
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `N11 = sum_{n_ij > 1} C(n_ij, 2)`.
    pub fn intra_pairs_both(&self) -> u64 {
        self.entries
            .iter()
            .filter(|(_, c)| *c > 1)
            .map(|&(_, c)| choose2(c as u64))
            .sum()
    }

    pub fn pair_counts(&self) -> Result<PairCounts, PartitionError> {
        if self.n < 2 {
            return Err(PartitionError::NoPairs);
        }
        let n11 = self.intra_pairs_both();
        let m_a: u64 = self.row_sums.iter().map(|&s| choose2(s as u64)).sum();
        let m_b: u64 = self.col_sums.iter().map(|&s| choose2(s as u64)).sum();
        let total = choose2(self.n as u64);
        Ok(PairCounts {
            n11,
            n10: m_a - n11,
            n01: m_b - n11,
            n00: total + n11 - m_a - m_b,
        })
    }

    /// Joint entropy `H(A,B)` in nats.
    pub fn joint_entropy(&self) -> f64 {
        entropy_of_counts(self.entries.iter().map(|&(_, c)| c), self.n)
    }

    pub fn row_entropy(&self) -> f64 {
        entropy_of_counts(self.row_sums.iter().copied(), self.n)
    }

    pub fn col_entropy(&self) -> f64 {
        entropy_of_counts(self.col_sums.iter().copied(), self.n)
    }

    /// `M(A,B) = H(A) + H(B) - H(A,B)`, clamped at zero against rounding.
    pub fn mutual_information(&self) -> f64 {
        (self.row_entropy() + self.col_entropy() - self.joint_entropy()).max(0.0)
    }
}

/// Exact integer pair tallies of two partitions on the same elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairCounts {
    pub n11: u64,
    pub n10: u64,
    pub n01: u64,
    pub n00: u64,
}

impl PairCounts {
    pub fn new(n11: u64, n10: u64, n01: u64, n00: u64) -> Self {
        PairCounts { n11, n10, n01, n00 }
    }

    pub fn total(&self) -> u64 {
        self.n11 + self.n10 + self.n01 + self.n00
    }

    pub fn m_a(&self) -> u64 {
        self.n11 + self.n10
    }

    pub fn m_b(&self) -> u64 {
        self.n11 + self.n01
    }

    /// Counts with the roles of the two partitions exchanged.
    pub fn swapped(&self) -> Self {
        PairCounts::new(self.n11, self.n01, self.n10, self.n00)
    }

    pub fn to_real(&self) -> RealPairCounts {
        RealPairCounts {
            n11: self.n11 as f64,
            n10: self.n10 as f64,
            n01: self.n01 as f64,
            n00: self.n00 as f64,
        }
    }
}

/// Real-valued pair tallies; used for expected pair counts and for grid scans
/// over the pair-count simplex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealPairCounts {
    pub n11: f64,
    pub n10: f64,
    pub n01: f64,
    pub n00: f64,
}

impl RealPairCounts {
    pub fn new(n11: f64, n10: f64, n01: f64, n00: f64) -> Self {
        RealPairCounts { n11, n10, n01, n00 }
    }

    pub fn total(&self) -> f64 {
        self.n11 + self.n10 + self.n01 + self.n00
    }

    pub fn m_a(&self) -> f64 {
        self.n11 + self.n10
    }

    pub fn m_b(&self) -> f64 {
        self.n11 + self.n01
    }

    pub fn p_a(&self) -> f64 {
        self.m_a() / self.total()
    }

    pub fn p_b(&self) -> f64 {
        self.m_b() / self.total()
    }

    pub fn p_ab(&self) -> f64 {
        self.n11 / self.total()
    }

    pub fn swapped(&self) -> Self {
        RealPairCounts::new(self.n11, self.n01, self.n10, self.n00)
    }
}

impl From<PairCounts> for RealPairCounts {
    fn from(pc: PairCounts) -> Self {
        pc.to_real()
    }
}

pub fn contingency(a: &Partition, b: &Partition) -> Result<ContingencyTable, PartitionError> {
    ContingencyTable::new(a, b)
}

pub fn pair_counts(a: &Partition, b: &Partition) -> Result<PairCounts, PartitionError> {
    ContingencyTable::new(a, b)?.pair_counts()
}

/// Shannon entropy (nats) of the cluster-size distribution.
pub fn entropy(p: &Partition) -> f64 {
    entropy_of_counts(p.sizes().iter().copied(), p.n())
}

pub fn joint_entropy(a: &Partition, b: &Partition) -> Result<f64, PartitionError> {
    Ok(ContingencyTable::new(a, b)?.joint_entropy())
}

pub fn mutual_information(a: &Partition, b: &Partition) -> Result<f64, PartitionError> {
    Ok(ContingencyTable::new(a, b)?.mutual_information())
}

/// `-sum (c/n) ln(c/n)`, with `0 ln 0 = 0`.
pub(crate) fn entropy_of_counts(counts: impl Iterator<Item = usize>, n: usize) -> f64 {
    let n = n as f64;
    let h: f64 = counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum();
    h.max(0.0)
}
