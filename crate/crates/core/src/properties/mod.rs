//! Mechanical checks of the formal properties of similarity indices.
//!
//! Partition-level properties are decided by exhaustive search over all
//! partitions up to a size bound; pair-count properties by scanning integer
//! grids; baseline and bias properties by evaluating the index at expected
//! pair counts. A "holds" verdict means no counterexample exists within the
//! recorded bound. Every violation carries a witness that can be re-checked.

mod exhaustive;
mod grid;
mod witness;

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::enumerate_with_sizes;
use crate::error::IndexError;
use crate::indices::{Evaluator, Family, IndexId};
use crate::partition::{ClusterSizeSpec, Partition};

pub use exhaustive::Checker;
pub use grid::{BiasClassification, GradientSample};
pub use witness::Witness;

/// Equality tolerance for index values.
pub const EQ_TOL: f64 = 1e-9;
/// Minimum gain that counts as a strict improvement.
pub const STRICT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    MaxAgreement,
    MinAgreement,
    Symmetry,
    Distance,
    LinearComplexity,
    Monotonicity,
    StrongMonotonicity,
    ConstantBaselineExact,
    ConstantBaselineAsymptotic,
    Bias,
}

impl Property {
    pub fn as_str(self) -> &'static str {
        match self {
            Property::MaxAgreement => "max_agreement",
            Property::MinAgreement => "min_agreement",
            Property::Symmetry => "symmetry",
            Property::Distance => "distance",
            Property::LinearComplexity => "linear_complexity",
            Property::Monotonicity => "monotonicity",
            Property::StrongMonotonicity => "strong_monotonicity",
            Property::ConstantBaselineExact => "constant_baseline_exact",
            Property::ConstantBaselineAsymptotic => "constant_baseline_asymptotic",
            Property::Bias => "bias",
        }
    }

    /// Short column header used in rendered tables.
    pub fn short(self) -> &'static str {
        match self {
            Property::MaxAgreement => "max",
            Property::MinAgreement => "min",
            Property::Symmetry => "sym",
            Property::Distance => "dist",
            Property::LinearComplexity => "lin",
            Property::Monotonicity => "mono",
            Property::StrongMonotonicity => "strong",
            Property::ConstantBaselineExact => "cb",
            Property::ConstantBaselineAsymptotic => "acb",
            Property::Bias => "bias",
        }
    }

    /// Properties reported for an index family, in column order.
    pub fn columns(family: Family) -> &'static [Property] {
        use Property::*;
        match family {
            Family::PairCounting => &[
                MaxAgreement,
                MinAgreement,
                Symmetry,
                Distance,
                LinearComplexity,
                Monotonicity,
                StrongMonotonicity,
                ConstantBaselineExact,
                ConstantBaselineAsymptotic,
                Bias,
            ],
            _ => &[
                MaxAgreement,
                Symmetry,
                Distance,
                LinearComplexity,
                Monotonicity,
                ConstantBaselineExact,
            ],
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Violated,
    Bias(BiasClassification),
    NotApplicable { reason: String },
    Error { message: String },
}

/// Outcome of one (index, property) check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyVerdict {
    pub index: IndexId,
    pub property: Property,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Exhausted region, e.g. `n <= 6` or `N <= 200`.
    pub search_bound: String,
    /// Constant found when the property holds (`c_max`, `c_min`, `c_base`).
    pub constant: Option<f64>,
    /// Undefined index values skipped during the search.
    pub skipped_undefined: usize,
}

impl PropertyVerdict {
    fn new(index: IndexId, property: Property, search_bound: impl Into<String>) -> Self {
        PropertyVerdict {
            index,
            property,
            verdict: Verdict::Holds,
            witness: None,
            search_bound: search_bound.into(),
            constant: None,
            skipped_undefined: 0,
        }
    }

    fn violated(mut self, w: Witness) -> Self {
        self.verdict = Verdict::Violated;
        self.witness = Some(w);
        self.constant = None;
        self
    }

    fn error(index: IndexId, property: Property, e: impl fmt::Display) -> Self {
        let mut v = PropertyVerdict::new(index, property, "");
        v.verdict = Verdict::Error {
            message: e.to_string(),
        };
        v
    }

    /// `Some(true)` for holds, `Some(false)` for violated.
    pub fn holds(&self) -> Option<bool> {
        match self.verdict {
            Verdict::Holds => Some(true),
            Verdict::Violated => Some(false),
            _ => None,
        }
    }

    /// Table cell: `✓`, `✗`, the bias class, `n/a` or `error`.
    pub fn cell(&self) -> String {
        match &self.verdict {
            Verdict::Holds => "✓".into(),
            Verdict::Violated => "✗".into(),
            Verdict::Bias(b) => b.label().into(),
            Verdict::NotApplicable { .. } => "n/a".into(),
            Verdict::Error { .. } => "error".into(),
        }
    }
}

/// Search limits for the property checkers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Largest `n` for exhaustive partition searches.
    pub n_max: usize,
    /// Largest `n` for indices with permutation-model expectations.
    pub n_max_sampled: usize,
    /// Largest `N` for the minimal-agreement constancy scan.
    pub min_grid: u64,
    /// Largest `N` for the strictness part of minimal agreement.
    pub strict_grid: u64,
    /// Largest `N` for strong monotonicity.
    pub strong_grid: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            n_max: 6,
            n_max_sampled: 6,
            min_grid: 200,
            strict_grid: 60,
            strong_grid: 40,
        }
    }
}

impl Budget {
    pub fn with_n_max(n_max: usize) -> Self {
        Budget {
            n_max,
            n_max_sampled: n_max,
            ..Budget::default()
        }
    }

    pub fn n_for(&self, id: IndexId) -> usize {
        if id.descriptor().needs_sampling {
            self.n_max_sampled
        } else {
            self.n_max
        }
    }
}

/// Exact mean of `V(A, B)` over all `B` with sizes `s`; `None` when the index
/// is undefined for some such `B`.
pub fn exact_baseline_mean(
    id: IndexId,
    a: &Partition,
    s: &ClusterSizeSpec,
    e: &Evaluator,
) -> Result<Option<f64>, IndexError> {
    let bs = enumerate_with_sizes(s)?;
    let mut sum = 0.0;
    for b in &bs {
        match e.score(id, a, b)?.value() {
            Some(v) => sum += v,
            None => return Ok(None),
        }
    }
    Ok(Some(sum / bs.len() as f64))
}

pub fn check_max_agreement(id: IndexId, n_max: usize) -> PropertyVerdict {
    Checker::new().max_agreement(id, n_max)
}

pub fn check_min_agreement(id: IndexId) -> PropertyVerdict {
    let b = Budget::default();
    grid::min_agreement(id, b.min_grid, b.strict_grid)
}

pub fn check_symmetry(id: IndexId, n_max: usize) -> PropertyVerdict {
    Checker::new().symmetry(id, n_max)
}

pub fn check_distance(id: IndexId, n_max: usize) -> PropertyVerdict {
    Checker::new().distance(id, n_max)
}

pub fn check_monotonicity(id: IndexId, n_max: usize) -> PropertyVerdict {
    Checker::new().monotonicity(id, n_max)
}

pub fn check_strong_monotonicity(id: IndexId, grid_bound: u64) -> PropertyVerdict {
    grid::strong_monotonicity(id, grid_bound)
}

pub fn check_constant_baseline_exact(id: IndexId, n_max: usize) -> PropertyVerdict {
    Checker::new().constant_baseline_exact(id, n_max)
}

pub fn check_asymptotic_baseline(id: IndexId) -> PropertyVerdict {
    grid::asymptotic_baseline(id)
}

pub fn classify_bias(id: IndexId) -> Result<BiasClassification, IndexError> {
    grid::classify_bias(id)
}

pub fn check_linear_complexity(id: IndexId) -> PropertyVerdict {
    let mut v = PropertyVerdict::new(id, Property::LinearComplexity, "by construction");
    if id.descriptor().needs_sampling {
        v = v.violated(Witness::Analytic {
            reason: "needs moments of mutual information over random permutations".into(),
        });
    }
    v
}

/// Runs one property through the appropriate checker.
pub fn check(checker: &Checker, id: IndexId, p: Property, budget: &Budget) -> PropertyVerdict {
    let n = budget.n_for(id);
    let pair_only = |f: &dyn Fn() -> PropertyVerdict| {
        if id.is_pair_counting() {
            f()
        } else {
            let mut v = PropertyVerdict::new(id, p, "");
            v.verdict = Verdict::NotApplicable {
                reason: "defined on pair counts only".into(),
            };
            v
        }
    };
    match p {
        Property::MaxAgreement => checker.max_agreement(id, n),
        Property::Symmetry => checker.symmetry(id, n),
        Property::Distance => checker.distance(id, n),
        Property::Monotonicity => checker.monotonicity(id, n),
        Property::ConstantBaselineExact => checker.constant_baseline_exact(id, n),
        Property::LinearComplexity => check_linear_complexity(id),
        Property::MinAgreement => {
            pair_only(&|| grid::min_agreement(id, budget.min_grid, budget.strict_grid))
        }
        Property::StrongMonotonicity => {
            pair_only(&|| grid::strong_monotonicity(id, budget.strong_grid))
        }
        Property::ConstantBaselineAsymptotic => pair_only(&|| grid::asymptotic_baseline(id)),
        Property::Bias => pair_only(&|| grid::bias_verdict(id)),
    }
}

/// Every applicable property for every index, one row per (index, property),
/// in input order. Errors are recorded per cell.
pub fn property_matrix(ids: &[IndexId], budget: &Budget) -> Vec<PropertyVerdict> {
    let checker = Checker::new();
    let cells: Vec<(IndexId, Property)> = ids
        .iter()
        .flat_map(|&id| Property::columns(id.family()).iter().map(move |&p| (id, p)))
        .collect();
    cells
        .par_iter()
        .map(|&(id, p)| check(&checker, id, p, budget))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_per_family() {
        assert_eq!(Property::columns(Family::PairCounting).len(), 10);
        assert_eq!(Property::columns(Family::SetMatching).len(), 6);
    }

    #[test]
    fn linear_complexity_by_construction() {
        assert_eq!(check_linear_complexity(IndexId::Rand).holds(), Some(true));
        let ami = check_linear_complexity(IndexId::Ami);
        assert_eq!(ami.holds(), Some(false));
        assert!(ami.witness.unwrap().recheck(IndexId::Ami, &Evaluator::exact()).unwrap());
    }
}
