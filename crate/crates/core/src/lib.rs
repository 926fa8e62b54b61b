//! Cluster similarity indices and a toolkit for checking their formal
//! properties.
//!
//! Partitions are compared through their contingency table or their four pair
//! counts. On top of the index registry the crate provides exhaustive
//! small-`n` property checkers, seeded random clusterings with the
//! accompanying hypothesis tests, and the bias and inconsistency experiments.
//!
//! ```
//! use partition_similarity::{Evaluator, IndexId, Partition};
//!
//! let a = Partition::from_labels(&[0, 0, 1, 2]).unwrap();
//! let b = Partition::from_labels(&[0, 0, 1, 1]).unwrap();
//! let rand = Evaluator::default().score(IndexId::Rand, &a, &b).unwrap();
//! assert!((rand.value().unwrap() - 5.0 / 6.0).abs() < 1e-12);
//! ```

pub mod analysis;
pub mod contingency;
pub mod enumerate;
pub mod error;
pub mod indices;
pub mod moves;
pub mod partition;
pub mod properties;
pub mod stats;

pub use contingency::{ContingencyTable, PairCounts, RealPairCounts};
pub use error::{IndexError, PartitionError, StatsError};
pub use indices::{
    Evaluator, IndexDescriptor, IndexId, IndexScore, SamplingConfig, SamplingMode, Score,
};
pub use partition::{ClusterSizeSpec, Partition};
