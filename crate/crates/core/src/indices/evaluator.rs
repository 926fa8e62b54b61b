use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::contingency::ContingencyTable;
use crate::enumerate::{enumerate_with_sizes, ENUMERATION_GUARD};
use crate::error::{IndexError, PartitionError};
use crate::partition::{check_same_n, ClusterSizeSpec, Partition};
use crate::stats::rng::{sample_uniform_with_sizes, spec_key, SeededGenerator};

use super::general::{self, Entropies};
use super::pair::pair_value;
use super::{IndexId, IndexScore, Score};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMode {
    MonteCarlo,
    ExactEnumeration,
}

/// How the permutation-model moments of mutual information are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub samples: usize,
    pub seed: u64,
    pub mode: SamplingMode,
}

impl SamplingConfig {
    pub fn exact() -> Self {
        SamplingConfig {
            samples: 0,
            seed: 0,
            mode: SamplingMode::ExactEnumeration,
        }
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        SamplingConfig {
            samples: samples.max(2),
            seed,
            mode: SamplingMode::MonteCarlo,
        }
    }
}

/// Mean and standard deviation of `M(A, B')` for `B'` uniform over one size
/// specification. `stderr` is the Monte Carlo standard error of `mean`
/// (absent for exact enumeration).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MiMoments {
    pub mean: f64,
    pub std: f64,
    pub stderr: Option<f64>,
    pub samples: usize,
}

/// Evaluates any registered index. Permutation moments depend on the two
/// partitions only through their size specifications and are cached per
/// pair of specifications.
#[derive(Debug, Default)]
pub struct Evaluator {
    cfg: Option<SamplingConfig>,
    cache: Mutex<HashMap<(ClusterSizeSpec, ClusterSizeSpec), MiMoments>>,
}

impl Clone for Evaluator {
    fn clone(&self) -> Self {
        Evaluator {
            cfg: self.cfg,
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl Evaluator {
    pub fn new(cfg: Option<SamplingConfig>) -> Self {
        Evaluator {
            cfg,
            cache: Mutex::default(),
        }
    }

    pub fn exact() -> Self {
        Evaluator::new(Some(SamplingConfig::exact()))
    }

    pub fn config(&self) -> Option<SamplingConfig> {
        self.cfg
    }

    pub fn score(&self, id: IndexId, a: &Partition, b: &Partition) -> Result<IndexScore, IndexError> {
        Ok(self.scores(&[id], a, b)?.remove(0))
    }

    /// Scores for several indices, sharing one contingency table.
    pub fn scores(
        &self,
        ids: &[IndexId],
        a: &Partition,
        b: &Partition,
    ) -> Result<Vec<IndexScore>, IndexError> {
        check_same_n(a, b)?;
        let table = ContingencyTable::new(a, b)?;
        let mut pairs = None;
        let mut entropies = None;
        let mut out = Vec::with_capacity(ids.len());
        for &id in ids {
            if id.is_pair_counting() {
                if pairs.is_none() {
                    pairs = Some(table.pair_counts()?.to_real());
                }
                let pc = pairs.as_ref().unwrap();
                out.push(IndexScore::exact(id, pair_value(id, pc)?));
                continue;
            }
            let e = entropies.get_or_insert_with(|| Entropies::of(&table));
            let s = match id {
                IndexId::Nmi => IndexScore::exact(id, general::nmi(e)),
                IndexId::NmiMax => IndexScore::exact(id, general::nmi_max(e)),
                IndexId::Fnmi => IndexScore::exact(id, general::fnmi(e, a.k(), b.k())),
                IndexId::Vi => IndexScore::exact(id, general::vi(e)),
                IndexId::FMeasure => IndexScore::exact(id, general::fmeasure(&table)),
                IndexId::BCubed => IndexScore::exact(id, general::bcubed(&table)),
                IndexId::Ami | IndexId::Smi => self.adjusted(id, e, a, b)?,
                _ => unreachable!("pair-counting ids handled above"),
            };
            out.push(s);
        }
        Ok(out)
    }

    fn adjusted(
        &self,
        id: IndexId,
        e: &Entropies,
        a: &Partition,
        b: &Partition,
    ) -> Result<IndexScore, IndexError> {
        if id == IndexId::Ami && e.ha == 0.0 && e.hb == 0.0 {
            return Ok(IndexScore::exact(id, Score::Value(1.0)));
        }
        let m = self.mi_moments(&a.size_spec(), &b.size_spec())?;
        let score = match id {
            IndexId::Ami => general::ami(e, m.mean),
            _ => general::smi(e, m.mean, m.std),
        };
        // delta-method propagation of the error in the expectation
        let stderr = match (score, m.stderr) {
            (Score::Value(_), Some(se)) => Some(match id {
                IndexId::Ami => {
                    let d = (e.ha * e.hb).sqrt() - m.mean;
                    se * ((e.mi - (e.ha * e.hb).sqrt()) / (d * d)).abs()
                }
                _ => se / m.std,
            }),
            _ => None,
        };
        Ok(IndexScore {
            index: id,
            score,
            stderr,
            samples: m.stderr.map(|_| m.samples),
        })
    }

    /// Moments of `M(A, B')`, `S(A) = spec_a`, `B'` uniform with sizes `spec_b`.
    pub fn mi_moments(
        &self,
        spec_a: &ClusterSizeSpec,
        spec_b: &ClusterSizeSpec,
    ) -> Result<MiMoments, IndexError> {
        let key = (spec_a.clone(), spec_b.clone());
        if let Some(m) = self.cache.lock().unwrap().get(&key) {
            return Ok(*m);
        }
        let cfg = self
            .cfg
            .ok_or_else(|| IndexError::MissingSamplingConfig("ami/smi".into()))?;
        let m = compute_moments(spec_a, spec_b, &cfg)?;
        self.cache.lock().unwrap().insert(key, m);
        Ok(m)
    }
}

fn compute_moments(
    spec_a: &ClusterSizeSpec,
    spec_b: &ClusterSizeSpec,
    cfg: &SamplingConfig,
) -> Result<MiMoments, IndexError> {
    if spec_a.n() != spec_b.n() {
        return Err(PartitionError::SizeMismatch {
            left: spec_a.n(),
            right: spec_b.n(),
        }
        .into());
    }
    let a = spec_a.block_partition();
    let mi = |b: &Partition| -> f64 {
        ContingencyTable::new(&a, b)
            .expect("equal sizes")
            .mutual_information()
    };
    match cfg.mode {
        SamplingMode::ExactEnumeration => {
            if spec_a.n() > ENUMERATION_GUARD {
                return Err(IndexError::EnumerationGuard {
                    n: spec_a.n(),
                    max: ENUMERATION_GUARD,
                });
            }
            let values: Vec<f64> = enumerate_with_sizes(spec_b)?.iter().map(mi).collect();
            let (mean, var) = mean_var(&values, 0);
            Ok(MiMoments {
                mean,
                std: var.sqrt(),
                stderr: None,
                samples: values.len(),
            })
        }
        SamplingMode::MonteCarlo => {
            let mut g = SeededGenerator::new(cfg.seed, spec_key(0x4d49, &[spec_a, spec_b]));
            let values: Vec<f64> = (0..cfg.samples)
                .map(|_| mi(&sample_uniform_with_sizes(spec_b, &mut g)))
                .collect();
            let (mean, var) = mean_var(&values, 1);
            Ok(MiMoments {
                mean,
                std: var.sqrt(),
                stderr: Some((var / values.len() as f64).sqrt()),
                samples: values.len(),
            })
        }
    }
}

/// Mean and variance with `ddof` delta degrees of freedom.
fn mean_var(values: &[f64], ddof: usize) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() <= ddof {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (mean, ss / (n - ddof as f64))
}

/// Evaluates any index on two partitions; `cfg` is required for AMI and SMI.
pub fn eval_general_index(
    id: IndexId,
    a: &Partition,
    b: &Partition,
    cfg: Option<&SamplingConfig>,
) -> Result<IndexScore, IndexError> {
    if id.descriptor().needs_sampling && cfg.is_none() {
        return Err(IndexError::MissingSamplingConfig(id.to_string()));
    }
    Evaluator::new(cfg.copied()).score(id, a, b)
}

/// `E[M(A, B')]` over `B'` uniform with sizes `s`, with its standard error in
/// Monte Carlo mode.
pub fn expected_mutual_information(
    a: &Partition,
    s: &ClusterSizeSpec,
    cfg: &SamplingConfig,
) -> Result<MiMoments, IndexError> {
    compute_moments(&a.size_spec(), s, cfg)
}
