use crate::contingency::RealPairCounts;
use crate::error::IndexError;
use crate::partition::Partition;

use super::pair::pair_value;
use super::{IndexId, Score};

/// Pair counts with `N11` replaced by its expectation `m_A m_B / N`.
pub fn expected_pair_counts(m_a: f64, m_b: f64, n: f64) -> Result<RealPairCounts, IndexError> {
    let ok = n.is_finite() && n > 0.0 && (0.0..=n).contains(&m_a) && (0.0..=n).contains(&m_b);
    if !ok {
        return Err(IndexError::OutOfRange(format!(
            "m_A = {m_a}, m_B = {m_b}, N = {n}"
        )));
    }
    let n11 = m_a * m_b / n;
    // clamp rounding residue so the tallies stay non-negative
    Ok(RealPairCounts::new(
        n11,
        (m_a - n11).max(0.0),
        (m_b - n11).max(0.0),
        (n - m_a - m_b + n11).max(0.0),
    ))
}

/// `V^(s)(m_A, m_B)`: the index at expected pair counts, for interior
/// `m_A, m_B` in `(0, N)`.
pub fn substituted_index(id: IndexId, m_a: f64, m_b: f64, n: f64) -> Result<Score, IndexError> {
    if !id.is_pair_counting() {
        return Err(IndexError::NotPairCounting(id.to_string()));
    }
    if !(m_a > 0.0 && m_a < n && m_b > 0.0 && m_b < n) {
        return Err(IndexError::OutOfRange(format!(
            "m_A = {m_a}, m_B = {m_b} must lie strictly inside (0, {n})"
        )));
    }
    pair_value(id, &expected_pair_counts(m_a, m_b, n)?)
}

/// Unit vector in `R^N` (one coordinate per element pair `u < v`, in
/// lexicographic order) whose inner products reproduce the correlation
/// coefficient between nontrivial partitions.
///
/// One cluster maps to `1/sqrt(N)` in every coordinate and all singletons to
/// `-1/sqrt(N)`; otherwise the centred intra-pair indicator is normalised.
pub fn cc_embedding(a: &Partition) -> Result<Vec<f64>, IndexError> {
    let n = a.n();
    if n < 2 {
        return Err(crate::error::PartitionError::NoPairs.into());
    }
    let total = n * (n - 1) / 2;
    let root = (total as f64).sqrt();
    if a.k() == 1 {
        return Ok(vec![1.0 / root; total]);
    }
    if a.k() == n {
        return Ok(vec![-1.0 / root; total]);
    }
    let p = a.intra_pairs() as f64 / total as f64;
    let norm = (total as f64 * p * (1.0 - p)).sqrt();
    let mut out = Vec::with_capacity(total);
    for u in 0..n {
        for v in u + 1..n {
            let x = if a.label(u) == a.label(v) { 1.0 } else { 0.0 };
            out.push((x - p) / norm);
        }
    }
    Ok(out)
}
