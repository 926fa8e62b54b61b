use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::enumerate_with_sizes;
use crate::error::StatsError;
use crate::indices::{Evaluator, IndexId, SamplingConfig, SamplingMode};
use crate::partition::{ClusterSizeSpec, Partition};

use super::rng::{sample_uniform_with_sizes, SeededGenerator};

/// Balanced size specification `BS(n, k)`: `n mod k` clusters of size
/// `ceil(n/k)`, the rest of size `floor(n/k)`.
pub fn balanced_sizes(n: usize, k: usize) -> Result<ClusterSizeSpec, StatsError> {
    Ok(ClusterSizeSpec::balanced(n, k)?)
}

/// Mean of a sample with its standard error (`ddof = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SampleMean {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl SampleMean {
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            f64::NAN
        };
        SampleMean {
            mean,
            stderr,
            samples: n,
        }
    }
}

/// Values of `f(B)` for random `B` with sizes `s`, either over every such
/// clustering (exact) or over `cfg.samples` uniform draws. Draw `i` uses
/// substream `[i]` of the configured seed, so results do not depend on the
/// thread count.
pub fn sample_over_spec<T: Send>(
    s: &ClusterSizeSpec,
    cfg: &SamplingConfig,
    f: impl Fn(&Partition) -> Result<T, StatsError> + Sync + Send,
) -> Result<Vec<T>, StatsError> {
    match cfg.mode {
        SamplingMode::ExactEnumeration => enumerate_with_sizes(s)?.par_iter().map(f).collect(),
        SamplingMode::MonteCarlo => {
            let g = SeededGenerator::new(cfg.seed, 0);
            (0..cfg.samples as u64)
                .into_par_iter()
                .map(|i| f(&sample_uniform_with_sizes(s, &mut g.substream(&[i]))))
                .collect()
        }
    }
}

/// `E[V(A, B)]` over `B` with sizes `s`.
pub fn mean_score(
    id: IndexId,
    a: &Partition,
    s: &ClusterSizeSpec,
    cfg: &SamplingConfig,
    e: &Evaluator,
) -> Result<SampleMean, StatsError> {
    let xs = sample_over_spec(s, cfg, |b| {
        e.score(id, a, b)?
            .value()
            .ok_or_else(|| StatsError::Undefined(format!("{id} undefined for B = {b}")))
    })?;
    let mut m = SampleMean::of(&xs);
    if cfg.mode == SamplingMode::ExactEnumeration {
        m.stderr = 0.0;
    }
    Ok(m)
}

/// `E[CD] - 1/2` under the permutation model, estimated directly and through
/// the odd moments of the correlation coefficient:
/// `-(1/pi) sum_k (2k)! / (4^k (k!)^2 (2k+1)) E[CC^(2k+1)]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CdDeviation {
    pub mean_cd: f64,
    pub deviation: f64,
    pub stderr: f64,
    /// Partial sums of the series for `k = 0..=CD_SERIES_TERMS - 1`.
    pub series: Vec<f64>,
    pub samples: usize,
}

pub const CD_SERIES_TERMS: usize = 6;

fn arcsin_coefficient(k: usize) -> f64 {
    // (2k)! / (4^k (k!)^2) by the ratio (2j-1)/(2j)
    (1..=k).fold(1.0, |c, j| c * (2 * j - 1) as f64 / (2 * j) as f64)
}

pub fn estimate_cd_deviation(
    a: &Partition,
    s: &ClusterSizeSpec,
    cfg: &SamplingConfig,
    e: &Evaluator,
) -> Result<CdDeviation, StatsError> {
    let undefined = |b: &Partition| StatsError::Undefined(format!("correlation undefined for B = {b}"));
    let pairs = sample_over_spec(s, cfg, |b| {
        let cc = e.score(IndexId::CorrelationCoefficient, a, b)?.value();
        let cd = e.score(IndexId::CorrelationDistance, a, b)?.value();
        cc.zip(cd).ok_or_else(|| undefined(b))
    })?;
    let cds: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let m = SampleMean::of(&cds);
    let mut series = Vec::with_capacity(CD_SERIES_TERMS);
    let mut acc = 0.0;
    for k in 0..CD_SERIES_TERMS {
        let p = 2 * k as i32 + 1;
        let moment = pairs.iter().map(|x| x.0.powi(p)).sum::<f64>() / pairs.len() as f64;
        acc -= arcsin_coefficient(k) * moment / (p as f64 * PI);
        series.push(acc);
    }
    Ok(CdDeviation {
        mean_cd: m.mean,
        deviation: m.mean - 0.5,
        stderr: if cfg.mode == SamplingMode::ExactEnumeration {
            0.0
        } else {
            m.stderr
        },
        series,
        samples: m.samples,
    })
}

/// Spread of the pair fraction `p_AB = N11 / N` of two independent random
/// clusterings with sizes `BS(n, k)`.
pub fn pair_fraction_spread(
    n: usize,
    k: usize,
    samples: usize,
    seed: u64,
) -> Result<SampleMean, StatsError> {
    let s = balanced_sizes(n, k)?;
    let g = SeededGenerator::new(seed, 0x7061);
    let total = (n * (n - 1) / 2) as f64;
    let xs: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = g.substream(&[i]);
            let a = sample_uniform_with_sizes(&s, &mut rng);
            let b = sample_uniform_with_sizes(&s, &mut rng);
            let t = crate::contingency::ContingencyTable::new(&a, &b)?;
            Ok(t.intra_pairs_both() as f64 / total)
        })
        .collect::<Result<_, StatsError>>()?;
    let m = SampleMean::of(&xs);
    let var = xs.iter().map(|x| (x - m.mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    Ok(SampleMean {
        mean: m.mean,
        stderr: var.sqrt(),
        samples: m.samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn balanced_example() {
        assert_eq!(balanced_sizes(10, 3).unwrap().sizes(), &[4, 3, 3]);
        assert!(balanced_sizes(3, 4).is_err());
    }

    #[test]
    fn arcsin_coefficients() {
        let want = [1.0, 0.5, 0.375, 0.3125];
        for (k, w) in want.iter().enumerate() {
            assert_abs_diff_eq!(arcsin_coefficient(k), w, epsilon = 1e-15);
        }
    }

    #[test]
    fn cd_exact_small_case() {
        // B = A gives CD = 0, the other two give CC = -1/2, CD = 2/3
        let a = Partition::from_labels(&[0, 0, 1]).unwrap();
        let s = ClusterSizeSpec::new(vec![2, 1]).unwrap();
        let d = estimate_cd_deviation(&a, &s, &SamplingConfig::exact(), &Evaluator::exact()).unwrap();
        assert_abs_diff_eq!(d.mean_cd, 4.0 / 9.0, epsilon = 1e-12);
        assert_eq!(d.samples, 3);
    }

    #[test]
    fn mean_score_monte_carlo_is_reproducible() {
        let a = balanced_sizes(20, 4).unwrap().block_partition();
        let s = balanced_sizes(20, 3).unwrap();
        let cfg = SamplingConfig::monte_carlo(500, 9);
        let e = Evaluator::default();
        let x = mean_score(IndexId::Rand, &a, &s, &cfg, &e).unwrap();
        let y = mean_score(IndexId::Rand, &a, &s, &cfg, &e).unwrap();
        assert_eq!(x, y);
        assert!(x.stderr > 0.0);
    }
}
