use std::fmt;

use serde::Serialize;

use crate::error::IndexError;
use crate::indices::{Evaluator, IndexId};
use crate::partition::{check_same_n, Partition};
use crate::properties::EQ_TOL;

/// Which candidate an index prefers, after orienting lower-is-better scores.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preference {
    First,
    Second,
    Tie,
    /// At least one of the two scores is undefined.
    Undefined,
}

/// Agreement of two indices on one triplet. Consistency is only decided
/// when both indices strictly order the candidates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairVerdict {
    Consistent,
    Inconsistent,
    Tie,
}

impl fmt::Display for PairVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairVerdict::Consistent => "consistent",
            PairVerdict::Inconsistent => "inconsistent",
            PairVerdict::Tie => "tie",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexPreference {
    pub index: IndexId,
    pub v1: Option<f64>,
    pub v2: Option<f64>,
    pub preference: Preference,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TripletRecord {
    pub a: Partition,
    pub b1: Partition,
    pub b2: Partition,
    pub scores: Vec<IndexPreference>,
    /// Upper triangle in `scores` order: `(i, j, verdict)` with `i < j`.
    pub verdicts: Vec<(IndexId, IndexId, PairVerdict)>,
}

pub fn preference(id: IndexId, v1: Option<f64>, v2: Option<f64>) -> Preference {
    let d = id.descriptor();
    match (v1, v2) {
        (Some(x), Some(y)) => {
            let diff = d.orient(x) - d.orient(y);
            if diff > EQ_TOL {
                Preference::First
            } else if diff < -EQ_TOL {
                Preference::Second
            } else {
                Preference::Tie
            }
        }
        _ => Preference::Undefined,
    }
}

pub fn pair_verdict(p: Preference, q: Preference) -> PairVerdict {
    use Preference::*;
    match (p, q) {
        (First, First) | (Second, Second) => PairVerdict::Consistent,
        (First, Second) | (Second, First) => PairVerdict::Inconsistent,
        _ => PairVerdict::Tie,
    }
}

/// Scores both candidates against `a` and compares every pair of indices.
pub fn analyze_triplet(
    ids: &[IndexId],
    a: &Partition,
    b1: &Partition,
    b2: &Partition,
    e: &Evaluator,
) -> Result<TripletRecord, IndexError> {
    check_same_n(a, b1)?;
    check_same_n(a, b2)?;
    let s1 = e.scores(ids, a, b1)?;
    let s2 = e.scores(ids, a, b2)?;
    let scores: Vec<IndexPreference> = ids
        .iter()
        .zip(s1.iter().zip(&s2))
        .map(|(&id, (x, y))| IndexPreference {
            index: id,
            v1: x.value(),
            v2: y.value(),
            preference: preference(id, x.value(), y.value()),
        })
        .collect();
    let mut verdicts = Vec::new();
    for i in 0..scores.len() {
        for j in i + 1..scores.len() {
            verdicts.push((
                scores[i].index,
                scores[j].index,
                pair_verdict(scores[i].preference, scores[j].preference),
            ));
        }
    }
    Ok(TripletRecord {
        a: a.clone(),
        b1: b1.clone(),
        b2: b2.clone(),
        scores,
        verdicts,
    })
}

/// Pairwise counts over many triplets. Ties are kept out of the denominator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InconsistencyMatrix {
    pub ids: Vec<IndexId>,
    pub inconsistent: Vec<Vec<usize>>,
    pub consistent: Vec<Vec<usize>>,
    pub ties: Vec<Vec<usize>>,
}

impl InconsistencyMatrix {
    pub fn new(ids: &[IndexId]) -> Self {
        let z = vec![vec![0; ids.len()]; ids.len()];
        InconsistencyMatrix {
            ids: ids.to_vec(),
            inconsistent: z.clone(),
            consistent: z.clone(),
            ties: z,
        }
    }

    /// Adds a record whose scores are in `self.ids` order.
    pub fn add(&mut self, r: &TripletRecord) {
        let k = self.ids.len();
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let v = pair_verdict(r.scores[i].preference, r.scores[j].preference);
                let cell = match v {
                    PairVerdict::Consistent => &mut self.consistent,
                    PairVerdict::Inconsistent => &mut self.inconsistent,
                    PairVerdict::Tie => &mut self.ties,
                };
                cell[i][j] += 1;
            }
        }
    }

    /// Percentage of decided triplets on which the two indices disagree.
    pub fn percent(&self, i: usize, j: usize) -> Option<f64> {
        let decided = self.inconsistent[i][j] + self.consistent[i][j];
        (decided > 0).then(|| 100.0 * self.inconsistent[i][j] as f64 / decided as f64)
    }
}

pub fn inconsistency_matrix(ids: &[IndexId], records: &[TripletRecord]) -> InconsistencyMatrix {
    let mut m = InconsistencyMatrix::new(ids);
    for r in records {
        m.add(r);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(labels: &[u32]) -> Partition {
        Partition::from_labels(labels).unwrap()
    }

    #[test]
    fn identical_candidates_tie() {
        let ids = [IndexId::Nmi, IndexId::Rand, IndexId::Vi];
        let a = p(&[0, 0, 1, 1]);
        let b = p(&[0, 1, 1, 1]);
        let r = analyze_triplet(&ids, &a, &b, &b, &Evaluator::exact()).unwrap();
        assert!(r.verdicts.iter().all(|v| v.2 == PairVerdict::Tie));
        let m = inconsistency_matrix(&ids, &[r]);
        assert_eq!(m.percent(0, 1), None);
    }

    #[test]
    fn distances_are_oriented() {
        let a = p(&[0, 0, 1, 1]);
        let r = analyze_triplet(
            &[IndexId::Nmi, IndexId::Vi],
            &a,
            &a,
            &p(&[0, 1, 0, 1]),
            &Evaluator::exact(),
        )
        .unwrap();
        assert_eq!(r.scores[1].preference, Preference::First);
        assert_eq!(r.verdicts[0].2, PairVerdict::Consistent);
    }
}
