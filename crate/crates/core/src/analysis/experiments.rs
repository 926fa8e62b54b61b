//! Baseline curves of random clusterings against a fixed reference.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{PartitionError, StatsError};
use crate::indices::{Evaluator, IndexId};
use crate::partition::{ClusterSizeSpec, Partition};
use crate::stats::{sample_uniform_with_sizes, SeededGenerator};

/// Number of small clusters in the s-scan.
pub const S_SCAN_SMALL: usize = 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sweep {
    /// `k` balanced clusters.
    K,
    /// 31 clusters of size `s` plus one of size `n - 31 s`.
    S,
}

impl Sweep {
    pub fn as_str(self) -> &'static str {
        match self {
            Sweep::K => "k",
            Sweep::S => "s",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub x: usize,
    pub index: IndexId,
    pub mean: f64,
    pub stderr: f64,
    pub q05: f64,
    pub q95: f64,
    /// Defined scores among the drawn clusterings.
    pub defined: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentCurve {
    pub sweep: Sweep,
    pub seed: u64,
    pub samples: usize,
    pub indices: Vec<IndexId>,
    /// Point-major: for each sweep value, one entry per index in `indices` order.
    pub points: Vec<CurvePoint>,
}

impl ExperimentCurve {
    pub fn series(&self, id: IndexId) -> Vec<&CurvePoint> {
        self.points.iter().filter(|p| p.index == id).collect()
    }
}

/// Empirical quantile with linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

fn summarize(x: usize, id: IndexId, mut v: Vec<f64>) -> CurvePoint {
    if v.is_empty() {
        return CurvePoint {
            x,
            index: id,
            mean: f64::NAN,
            stderr: f64::NAN,
            q05: f64::NAN,
            q95: f64::NAN,
            defined: 0,
        };
    }
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let stderr = if v.len() > 1 {
        (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt()
    } else {
        0.0
    };
    CurvePoint {
        x,
        index: id,
        mean,
        stderr,
        q05: quantile(&v, 0.05),
        q95: quantile(&v, 0.95),
        defined: v.len(),
    }
}

fn scan(
    sweep: Sweep,
    a: &Partition,
    specs: Vec<(usize, ClusterSizeSpec)>,
    samples: usize,
    ids: &[IndexId],
    seed: u64,
    e: &Evaluator,
) -> Result<ExperimentCurve, StatsError> {
    if samples == 0 {
        return Err(StatsError::TooFewSamples { needed: 1, got: 0 });
    }
    let g = SeededGenerator::new(seed, sweep as u64 + 1);
    let per_point: Vec<Vec<CurvePoint>> = specs
        .par_iter()
        .map(|(x, s)| {
            let rows: Vec<Vec<Option<f64>>> = (0..samples as u64)
                .into_par_iter()
                .map(|i| {
                    let b = sample_uniform_with_sizes(s, &mut g.substream(&[*x as u64, i]));
                    Ok(e.scores(ids, a, &b)?.iter().map(|s| s.value()).collect())
                })
                .collect::<Result<_, StatsError>>()?;
            Ok(ids
                .iter()
                .enumerate()
                .map(|(j, &id)| summarize(*x, id, rows.iter().filter_map(|r| r[j]).collect()))
                .collect())
        })
        .collect::<Result<_, StatsError>>()?;
    Ok(ExperimentCurve {
        sweep,
        seed,
        samples,
        indices: ids.to_vec(),
        points: per_point.into_iter().flatten().collect(),
    })
}

/// `k = 2, 4, ..., 512` (powers of two).
pub fn default_k_values() -> Vec<usize> {
    (1..=9).map(|e| 1 << e).collect()
}

/// `s = 1, ..., 28`.
pub fn default_s_values() -> Vec<usize> {
    (1..=28).collect()
}

/// Random clusterings with sizes `BS(n, k)` for each `k`.
pub fn k_scan(
    a: &Partition,
    k_values: &[usize],
    samples: usize,
    ids: &[IndexId],
    seed: u64,
    e: &Evaluator,
) -> Result<ExperimentCurve, StatsError> {
    let specs = k_values
        .iter()
        .map(|&k| Ok((k, ClusterSizeSpec::balanced(a.n(), k)?)))
        .collect::<Result<_, StatsError>>()?;
    scan(Sweep::K, a, specs, samples, ids, seed, e)
}

/// Sizes for the s-scan: 31 clusters of size `s`, one of size `n - 31 s`.
pub fn s_scan_sizes(n: usize, s: usize) -> Result<ClusterSizeSpec, PartitionError> {
    if s == 0 || S_SCAN_SMALL * s >= n {
        return Err(PartitionError::ClusterCountOutOfRange { n, k: S_SCAN_SMALL + 1 });
    }
    let mut sizes = vec![s; S_SCAN_SMALL];
    sizes.push(n - S_SCAN_SMALL * s);
    ClusterSizeSpec::new(sizes)
}

pub fn s_scan(
    a: &Partition,
    s_values: &[usize],
    samples: usize,
    ids: &[IndexId],
    seed: u64,
    e: &Evaluator,
) -> Result<ExperimentCurve, StatsError> {
    let specs = s_values
        .iter()
        .map(|&s| Ok((s, s_scan_sizes(a.n(), s)?)))
        .collect::<Result<_, StatsError>>()?;
    scan(Sweep::S, a, specs, samples, ids, seed, e)
}

/// Largest pairwise gap between point means relative to the standard error
/// of that difference. Values below 3 count as flat.
pub fn flatness_ratio(points: &[&CurvePoint]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            let se = (p.stderr.powi(2) + q.stderr.powi(2)).sqrt();
            let gap = (p.mean - q.mean).abs();
            let r = if se > 0.0 {
                gap / se
            } else if gap > 0.0 {
                f64::INFINITY
            } else {
                0.0
            };
            worst = worst.max(r);
        }
    }
    worst
}

/// Kendall rank correlation between sweep position and point mean.
pub fn trend(points: &[&CurvePoint]) -> f64 {
    let m = points.len();
    if m < 2 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            s += (points[j].mean - points[i].mean).signum();
        }
    }
    s / (m * (m - 1) / 2) as f64
}
