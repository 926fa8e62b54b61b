//! Constant-baseline and selection-bias tests across several sizes `n`,
//! combined per index with Fisher's method.

use serde::Serialize;

use crate::error::StatsError;
use crate::indices::{Evaluator, IndexId, SamplingConfig};
use crate::partition::{ClusterSizeSpec, Partition};
use crate::stats::{
    anova_baseline_test, balanced_sizes, chisq_selection_bias_test, fisher_combine, stream_key,
    SeededGenerator, TestReport, ALPHA,
};

pub const DEFAULT_N_VALUES: [usize; 4] = [50, 100, 150, 200];
pub const DEFAULT_R: usize = 100;
/// Permutation-model samples for AMI/SMI expectations.
pub const DEFAULT_MI_SAMPLES: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub n_values: Vec<usize>,
    pub r: usize,
    pub seed: u64,
    pub mi_samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n_values: DEFAULT_N_VALUES.to_vec(),
            r: DEFAULT_R,
            seed: 0,
            mi_samples: DEFAULT_MI_SAMPLES,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CombinedResult {
    pub statistic: f64,
    pub p_value: f64,
    pub reject: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BaselineRow {
    pub index: IndexId,
    pub anova: Vec<TestReport>,
    pub selection: Vec<TestReport>,
    pub anova_combined: CombinedResult,
    pub selection_combined: CombinedResult,
}

fn root(n: usize, e: f64) -> usize {
    ((n as f64).powf(e) + 1e-9).floor() as usize
}

/// Reference `BS(n, floor(sqrt n))` and candidate specs `BS(n, floor(n^e))`
/// for `e` in 0.25, 0.5, 0.75.
pub fn suite_design(n: usize) -> Result<(Partition, Vec<ClusterSizeSpec>), StatsError> {
    let a = balanced_sizes(n, root(n, 0.5))?.block_partition();
    let specs = [0.25, 0.5, 0.75]
        .iter()
        .map(|&e| balanced_sizes(n, root(n, e)))
        .collect::<Result<_, _>>()?;
    Ok((a, specs))
}

fn combine(reports: &[TestReport]) -> Result<CombinedResult, StatsError> {
    // p = 0 from an underflowing tail is clamped to the smallest double
    let ps: Vec<f64> = reports.iter().map(|r| r.p_value.max(f64::MIN_POSITIVE)).collect();
    let (statistic, p_value) = fisher_combine(&ps)?;
    Ok(CombinedResult {
        statistic,
        p_value,
        reject: p_value < ALPHA,
    })
}

/// Runs both tests for every index and every `n`. All indices at one `n`
/// see the same random clusterings.
pub fn baseline_suite(ids: &[IndexId], cfg: &SuiteConfig) -> Result<Vec<BaselineRow>, StatsError> {
    let e = Evaluator::new(Some(SamplingConfig::monte_carlo(
        cfg.mi_samples,
        stream_key(&[cfg.seed, 0x414d49]),
    )));
    let designs = cfg
        .n_values
        .iter()
        .map(|&n| suite_design(n))
        .collect::<Result<Vec<_>, _>>()?;
    ids.iter()
        .map(|&id| {
            let mut anova = Vec::new();
            let mut selection = Vec::new();
            for (&n, (a, specs)) in cfg.n_values.iter().zip(&designs) {
                let g = SeededGenerator::new(cfg.seed, n as u64);
                anova.push(anova_baseline_test(id, a, specs, cfg.r, &g, &e)?);
                selection.push(chisq_selection_bias_test(id, a, specs, cfg.r, &g, &e)?);
            }
            Ok(BaselineRow {
                index: id,
                anova_combined: combine(&anova)?,
                selection_combined: combine(&selection)?,
                anova,
                selection,
            })
        })
        .collect()
}
