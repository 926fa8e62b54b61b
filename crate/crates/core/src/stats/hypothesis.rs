use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF, FisherSnedecor};

use crate::error::StatsError;
use crate::indices::{Evaluator, IndexId};
use crate::partition::{ClusterSizeSpec, Partition};

use super::rng::{sample_uniform_with_sizes, SeededGenerator};

/// Significance level used for every decision.
pub const ALPHA: f64 = 0.05;
/// Group size below which the normal approximation behind ANOVA is flagged.
pub const MIN_ROBUST_SAMPLES: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestKind {
    AnovaBaseline,
    ChisqSelection,
    FisherCombined,
}

impl TestKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TestKind::AnovaBaseline => "anova-baseline",
            TestKind::ChisqSelection => "chisq-selection",
            TestKind::FisherCombined => "fisher-combined",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestReport {
    pub test: TestKind,
    pub index: IndexId,
    pub n: usize,
    pub specs: Vec<ClusterSizeSpec>,
    pub r: usize,
    pub seed: u64,
    pub statistic: f64,
    pub p_value: f64,
    /// `p_value < ALPHA`.
    pub reject: bool,
    /// Per-group means (ANOVA) or win counts (selection test).
    pub groups: Vec<f64>,
    /// Pools in which the best score was tied (selection test).
    pub ties: usize,
    pub warnings: Vec<String>,
}

fn validate(a: &Partition, specs: &[ClusterSizeSpec], r: usize) -> Result<(), StatsError> {
    let (n, k) = (a.n(), a.k());
    if k <= 1 || k >= n {
        return Err(StatsError::DegenerateReference { n, k });
    }
    if let Some(s) = specs.iter().find(|s| s.n() != n) {
        return Err(StatsError::SpecMismatch { n, spec_n: s.n() });
    }
    if specs.len() < 2 {
        return Err(StatsError::TooFewGroups(2));
    }
    if r < 2 {
        return Err(StatsError::TooFewSamples { needed: 2, got: r });
    }
    Ok(())
}

fn score(e: &Evaluator, id: IndexId, a: &Partition, b: &Partition) -> Result<f64, StatsError> {
    e.score(id, a, b)?
        .value()
        .ok_or_else(|| StatsError::Undefined(format!("{id} undefined on a sampled clustering")))
}

/// Scores of `r` random clusterings per size specification against `a`.
/// Group `i` uses the substream `[0, i]` of `g`.
pub fn sample_groups(
    id: IndexId,
    a: &Partition,
    specs: &[ClusterSizeSpec],
    r: usize,
    g: &SeededGenerator,
    e: &Evaluator,
) -> Result<Vec<Vec<f64>>, StatsError> {
    specs
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let mut rng = g.substream(&[0, i as u64]);
            (0..r)
                .map(|_| score(e, id, a, &sample_uniform_with_sizes(s, &mut rng)))
                .collect()
        })
        .collect()
}

/// One-way ANOVA on the groups: `(F, p, df_between, df_within)`.
pub fn one_way_anova(groups: &[Vec<f64>]) -> Result<(f64, f64), StatsError> {
    let k = groups.len();
    if k < 2 {
        return Err(StatsError::TooFewGroups(2));
    }
    let total: usize = groups.iter().map(Vec::len).sum();
    if total <= k || groups.iter().any(|g| g.is_empty()) {
        return Err(StatsError::TooFewSamples {
            needed: 2,
            got: groups.iter().map(Vec::len).min().unwrap_or(0),
        });
    }
    let grand = groups.iter().flatten().sum::<f64>() / total as f64;
    let mut ssb = 0.0;
    let mut ssw = 0.0;
    for g in groups {
        let m = g.iter().sum::<f64>() / g.len() as f64;
        ssb += g.len() as f64 * (m - grand).powi(2);
        ssw += g.iter().map(|x| (x - m).powi(2)).sum::<f64>();
    }
    if ssw <= 0.0 {
        return Err(StatsError::Undefined("zero within-group variance".into()));
    }
    let (d1, d2) = ((k - 1) as f64, (total - k) as f64);
    let f = (ssb / d1) / (ssw / d2);
    let dist = FisherSnedecor::new(d1, d2).map_err(|e| StatsError::Undefined(e.to_string()))?;
    Ok((f, dist.sf(f)))
}

/// Tests whether the expected score of a random clustering is the same for
/// every size specification.
pub fn anova_baseline_test(
    id: IndexId,
    a: &Partition,
    specs: &[ClusterSizeSpec],
    r: usize,
    g: &SeededGenerator,
    e: &Evaluator,
) -> Result<TestReport, StatsError> {
    validate(a, specs, r)?;
    let groups = sample_groups(id, a, specs, r, g, e)?;
    let (f, p) = one_way_anova(&groups)?;
    let mut warnings = Vec::new();
    if r < MIN_ROBUST_SAMPLES {
        warnings.push(format!(
            "r = {r} below {MIN_ROBUST_SAMPLES}; the F approximation may be poor"
        ));
    }
    Ok(TestReport {
        test: TestKind::AnovaBaseline,
        index: id,
        n: a.n(),
        specs: specs.to_vec(),
        r,
        seed: g.seed(),
        statistic: f,
        p_value: p,
        reject: p < ALPHA,
        groups: groups
            .iter()
            .map(|g| g.iter().sum::<f64>() / g.len() as f64)
            .collect(),
        ties: 0,
        warnings,
    })
}

/// Pearson chi-squared statistic against a uniform distribution of counts.
pub fn chisq_uniform(counts: &[usize]) -> Result<(f64, f64), StatsError> {
    let k = counts.len();
    if k < 2 {
        return Err(StatsError::TooFewGroups(2));
    }
    let total: usize = counts.iter().sum();
    if total == 0 {
        return Err(StatsError::TooFewSamples { needed: 1, got: 0 });
    }
    let expected = total as f64 / k as f64;
    let stat: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let dist = ChiSquared::new((k - 1) as f64).map_err(|e| StatsError::Undefined(e.to_string()))?;
    Ok((stat, dist.sf(stat)))
}

/// In each of `r` pools one clustering per size profile is drawn; the profile
/// whose clustering scores best wins the pool (lowest position on ties).
/// Without selection bias the wins are uniform over profiles.
pub fn chisq_selection_bias_test(
    id: IndexId,
    a: &Partition,
    specs: &[ClusterSizeSpec],
    r: usize,
    g: &SeededGenerator,
    e: &Evaluator,
) -> Result<TestReport, StatsError> {
    validate(a, specs, r)?;
    let d = id.descriptor();
    let outcomes: Vec<(usize, bool)> = (0..r)
        .into_par_iter()
        .map(|pool| {
            let mut rng = g.substream(&[1, pool as u64]);
            let mut best: Option<(usize, f64)> = None;
            let mut tie = false;
            for (i, s) in specs.iter().enumerate() {
                let v = d.orient(score(e, id, a, &sample_uniform_with_sizes(s, &mut rng))?);
                match best {
                    Some((_, b)) if v > b => {
                        best = Some((i, v));
                        tie = false;
                    }
                    Some((_, b)) if v == b => tie = true,
                    None => best = Some((i, v)),
                    _ => {}
                }
            }
            Ok((best.expect("at least two specs").0, tie))
        })
        .collect::<Result<_, StatsError>>()?;
    let mut wins = vec![0usize; specs.len()];
    let mut ties = 0;
    for (w, tie) in outcomes {
        wins[w] += 1;
        ties += tie as usize;
    }
    let (stat, p) = chisq_uniform(&wins)?;
    let mut warnings = Vec::new();
    if ties > 0 {
        warnings.push(format!("{ties} tied pools resolved to the lowest position"));
    }
    Ok(TestReport {
        test: TestKind::ChisqSelection,
        index: id,
        n: a.n(),
        specs: specs.to_vec(),
        r,
        seed: g.seed(),
        statistic: stat,
        p_value: p,
        reject: p < ALPHA,
        groups: wins.iter().map(|&w| w as f64).collect(),
        ties,
        warnings,
    })
}

/// Fisher's method: `(-2 sum ln p_i, combined p)` with `2m` degrees of
/// freedom.
pub fn fisher_combine(p_values: &[f64]) -> Result<(f64, f64), StatsError> {
    if p_values.is_empty() {
        return Err(StatsError::TooFewGroups(1));
    }
    if let Some(&bad) = p_values.iter().find(|&&p| !(p > 0.0 && p <= 1.0)) {
        return Err(StatsError::InvalidPValue(bad));
    }
    let stat = -2.0 * p_values.iter().map(|p| p.ln()).sum::<f64>();
    let dist = ChiSquared::new(2.0 * p_values.len() as f64)
        .map_err(|e| StatsError::Undefined(e.to_string()))?;
    Ok((stat, dist.sf(stat).min(1.0)))
}
