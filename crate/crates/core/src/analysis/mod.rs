//! Experiments built on the index and statistics layers: triplet
//! consistency, inconsistency covers, baseline scans and the baseline test
//! suite.

pub mod baseline;
pub mod cover;
pub mod experiments;
pub mod fixture;
pub mod triplets;

pub use baseline::{baseline_suite, suite_design, BaselineRow, CombinedResult, SuiteConfig};
pub use cover::{find_inconsistency_cover, verify_cover, CoverBudget, CoverResult, CoverTriplet};
pub use experiments::{
    default_k_values, default_s_values, flatness_ratio, k_scan, s_scan, s_scan_sizes, trend,
    CurvePoint, ExperimentCurve, Sweep,
};
pub use fixture::{reference_fixture, synthetic_reference};
pub use triplets::{
    analyze_triplet, inconsistency_matrix, InconsistencyMatrix, PairVerdict, Preference,
    TripletRecord,
};
