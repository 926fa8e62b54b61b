//! Random clusterings and the hypothesis tests built on them.

pub mod hypothesis;
pub mod rng;
pub mod sampling;

pub use hypothesis::{
    anova_baseline_test, chisq_selection_bias_test, chisq_uniform, fisher_combine, one_way_anova,
    TestKind, TestReport, ALPHA, MIN_ROBUST_SAMPLES,
};
pub use rng::{sample_uniform_with_sizes, stream_key, SeededGenerator};
pub use sampling::{
    balanced_sizes, estimate_cd_deviation, mean_score, pair_fraction_spread, sample_over_spec,
    CdDeviation, SampleMean,
};
