use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("empty partition")]
    Empty,
    #[error("cluster with no elements")]
    EmptyCluster,
    #[error("clusters do not form a partition of 0..n (element {element})")]
    NotACover { element: usize },
    #[error("partition size mismatch: {left} vs {right} elements")]
    SizeMismatch { left: usize, right: usize },
    #[error("no pairs: partitions need at least 2 elements")]
    NoPairs,
    #[error("enumeration guard: n = {n} exceeds {max}")]
    EnumerationGuard { n: usize, max: usize },
    #[error("cluster count k = {k} out of range for n = {n}")]
    ClusterCountOutOfRange { n: usize, k: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IndexError {
    #[error("unknown index id `{0}`")]
    UnknownIndex(String),
    #[error("`{0}` is not a pair-counting index")]
    NotPairCounting(String),
    #[error("`{0}` needs a sampling configuration")]
    MissingSamplingConfig(String),
    #[error("exact enumeration requested for n = {n} above the guard {max}")]
    EnumerationGuard { n: usize, max: usize },
    #[error("pair-count arguments out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("reference clustering must satisfy 1 < k < n (k = {k}, n = {n})")]
    DegenerateReference { n: usize, k: usize },
    #[error("need at least {needed} samples per group, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("size specification for n = {spec_n} does not match reference n = {n}")]
    SpecMismatch { n: usize, spec_n: usize },
    #[error("test statistic undefined: {0}")]
    Undefined(String),
    #[error("p-value {0} outside (0, 1]")]
    InvalidPValue(f64),
    #[error("need at least {0} groups")]
    TooFewGroups(usize),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}
