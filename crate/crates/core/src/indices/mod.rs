//! Registry and evaluation of cluster similarity indices.
//!
//! Three families are covered: the pair-counting indices (functions of the
//! four pair tallies), information-theoretic indices built from partition
//! entropies, and set-matching indices built from the contingency table.

mod evaluator;
mod expected;
mod general;
mod pair;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::IndexError;

pub use evaluator::{
    eval_general_index, expected_mutual_information, Evaluator, MiMoments, SamplingConfig,
    SamplingMode,
};
pub use expected::{cc_embedding, expected_pair_counts, substituted_index};
pub use pair::{eval_pair_index, eval_pair_index_real};

macro_rules! index_ids {
    ($($variant:ident => $id:literal),* $(,)?) => {
        /// Identifier of an index in the registry.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum IndexId { $($variant),* }

        impl IndexId {
            pub const ALL: &'static [IndexId] = &[$(IndexId::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self { $(IndexId::$variant => $id),* }
            }
        }

        impl FromStr for IndexId {
            type Err = IndexError;

            fn from_str(s: &str) -> Result<Self, IndexError> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($id => Ok(IndexId::$variant),)*
                    other => Err(IndexError::UnknownIndex(other.to_string())),
                }
            }
        }
    };
}

index_ids! {
    Rand => "rand",
    AdjustedRand => "adjusted_rand",
    Jaccard => "jaccard",
    JaccardDistance => "jaccard_distance",
    Wallace1 => "wallace_1",
    Wallace2 => "wallace_2",
    Dice => "dice",
    CorrelationCoefficient => "correlation_coefficient",
    CorrelationDistance => "correlation_distance",
    SokalSneath1 => "sokal_sneath_1",
    Minkowski => "minkowski",
    Hubert => "hubert",
    FowlkesMallows => "fowlkes_mallows",
    SokalSneath2 => "sokal_sneath_2",
    NormalizedMirkin => "normalized_mirkin",
    Kulczynski => "kulczynski",
    McConnaughey => "mcconnaughey",
    Yule => "yule",
    Baulieu1 => "baulieu_1",
    RussellRao => "russell_rao",
    FagerMcGowan => "fager_mcgowan",
    Peirce => "peirce",
    Baulieu2 => "baulieu_2",
    SokalSneath3 => "sokal_sneath_3",
    GowerLegendre => "gower_legendre",
    RogersTanimoto => "rogers_tanimoto",
    GoodmanKruskal => "goodman_kruskal",
    Nmi => "nmi",
    NmiMax => "nmi_max",
    Fnmi => "fnmi",
    Vi => "vi",
    Ami => "ami",
    Smi => "smi",
    FMeasure => "fmeasure",
    BCubed => "bcubed",
}

impl fmt::Display for IndexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl IndexId {
    pub fn descriptor(self) -> IndexDescriptor {
        descriptor(self)
    }

    pub fn family(self) -> Family {
        self.descriptor().family
    }

    pub fn is_pair_counting(self) -> bool {
        self.family() == Family::PairCounting
    }

    /// Parses a comma-separated list of ids.
    pub fn parse_list(s: &str) -> Result<Vec<IndexId>, IndexError> {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(str::parse)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    PairCounting,
    InformationTheoretic,
    SetMatching,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::PairCounting => "pair-counting",
            Family::InformationTheoretic => "information-theoretic",
            Family::SetMatching => "set-matching",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    HigherIsBetter,
    LowerIsBetter,
}

/// Registry entry for one index.
///
/// Constants are raw index values (not oriented): `c_max` is the value of
/// every self-comparison `V(A,A)` and `c_min` the value at `N11 = N00 = 0`,
/// present only where these are constant. `c_base` is the exact expected
/// value under random candidates and `c_base_asymptotic` the value at the
/// expected pair counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexDescriptor {
    pub id: IndexId,
    pub name: &'static str,
    pub family: Family,
    pub direction: Direction,
    pub c_max: Option<f64>,
    pub c_min: Option<f64>,
    pub c_base: Option<f64>,
    pub c_base_asymptotic: Option<f64>,
    /// Representative of the linear-equivalence class.
    pub equivalence_rep: IndexId,
    /// Representative of the class of indices inducing identical preference
    /// orders for a fixed reference (linear or monotone transforms without
    /// argument swap).
    pub preference_class: IndexId,
    pub needs_sampling: bool,
    pub linear_complexity: bool,
}

impl IndexDescriptor {
    pub fn higher_is_better(&self) -> bool {
        self.direction == Direction::HigherIsBetter
    }

    /// Maps a raw value to "higher is more similar".
    pub fn orient(&self, v: f64) -> f64 {
        match self.direction {
            Direction::HigherIsBetter => v,
            Direction::LowerIsBetter => -v,
        }
    }
}

fn descriptor(id: IndexId) -> IndexDescriptor {
    use Direction::*;
    use Family::*;
    use IndexId::*;
    let (name, family, direction, c_max, c_min, c_base, c_base_asym, rep, pref) = match id {
        Rand => ("Rand", PairCounting, HigherIsBetter, Some(1.0), Some(0.0), None, None, Rand, Rand),
        AdjustedRand => ("Adjusted Rand", PairCounting, HigherIsBetter, Some(1.0), None, Some(0.0), Some(0.0), AdjustedRand, AdjustedRand),
        Jaccard => ("Jaccard", PairCounting, HigherIsBetter, Some(1.0), Some(0.0), None, None, Jaccard, Jaccard),
        JaccardDistance => ("Jaccard Distance", PairCounting, LowerIsBetter, Some(0.0), Some(1.0), None, None, Jaccard, Jaccard),
        Wallace1 => ("Wallace1", PairCounting, HigherIsBetter, Some(1.0), Some(0.0), None, None, Wallace1, Wallace1),
        Wallace2 => ("Wallace2", PairCounting, HigherIsBetter, Some(1.0), Some(0.0), None, None, Wallace1, Wallace2),
        Dice => ("Dice", PairCounting, HigherIsBetter, Some(1.0), Some(0.0), None, None, Dice, Jaccard),
        CorrelationCoefficient => ("Correlation Coefficient", PairCounting, HigherIsBetter, Some(1.0), Some(-1.0), Some(0.0), Some(0.0), CorrelationCoefficient, CorrelationCoefficient),
        CorrelationDistance => ("Correlation Distance", PairCounting, LowerIsBetter, Some(0.0), Some(1.0), None, Some(0.5), CorrelationDistance, CorrelationCoefficient),
        SokalSneath1 => ("Sokal&Sneath-I", PairCounting, HigherIsBetter, Some(1.0), Some(0.0), Some(0.5), Some(0.5), SokalSneath1, SokalSneath1),
        Minkowski => ("Minkowski", PairCounting, LowerIsBetter, Some(0.0), None, None, None, Minkowski, Minkowski),
        Hubert => ("Hubert", PairCounting, HigherIsBetter, Some(1.0), Some(-1.0), None, None, Rand, Rand),
        FowlkesMallows => ("Fowlkes&Mallow", PairCounting, HigherIsBetter, Some(1.0), Some(0.0), None, None, FowlkesMallows, FowlkesMallows),
        SokalSneath2 => ("Sokal&Sneath-II", PairCounting, HigherIsBetter, Some(1.0), Some(0.0), None, None, SokalSneath2, SokalSneath2),
        NormalizedMirkin => ("Normalized Mirkin", PairCounting, LowerIsBetter, Some(0.0), Some(1.0), None, None, Rand, Rand),
        Kulczynski => ("Kulczynski", PairCounting, HigherIsBetter, Some(1.0), Some(0.0), None, None, Kulczynski, Kulczynski),
        McConnaughey => ("McConnaughey", PairCounting, HigherIsBetter, Some(1.0), Some(-1.0), None, None, Kulczynski, Kulczynski),
        Yule => ("Yule", PairCounting, HigherIsBetter, None, None, None, Some(0.0), Yule, Yule),
        Baulieu1 => ("Baulieu-I", PairCounting, HigherIsBetter, Some(1.0), None, None, None, Baulieu1, Baulieu1),
        RussellRao => ("Russell&Rao", PairCounting, HigherIsBetter, None, Some(0.0), None, None, RussellRao, RussellRao),
        FagerMcGowan => ("Fager&McGowan", PairCounting, HigherIsBetter, None, None, None, None, FagerMcGowan, FagerMcGowan),
        Peirce => ("Peirce", PairCounting, HigherIsBetter, Some(1.0), Some(-1.0), Some(0.0), Some(0.0), Peirce, Peirce),
        Baulieu2 => ("Baulieu-II", PairCounting, HigherIsBetter, None, None, Some(0.0), Some(0.0), Baulieu2, Baulieu2),
        SokalSneath3 => ("Sokal&Sneath-III", PairCounting, HigherIsBetter, Some(1.0), Some(0.0), None, None, SokalSneath3, SokalSneath3),
        GowerLegendre => ("Gower&Legendre", PairCounting, HigherIsBetter, Some(1.0), Some(0.0), None, None, GowerLegendre, GowerLegendre),
        RogersTanimoto => ("Rogers&Tanimoto", PairCounting, HigherIsBetter, Some(1.0), Some(0.0), None, None, RogersTanimoto, RogersTanimoto),
        GoodmanKruskal => ("Goodman&Kruskal", PairCounting, HigherIsBetter, Some(1.0), Some(-1.0), None, Some(0.0), GoodmanKruskal, GoodmanKruskal),
        Nmi => ("NMI", InformationTheoretic, HigherIsBetter, Some(1.0), None, None, None, Nmi, Nmi),
        NmiMax => ("NMI_max", InformationTheoretic, HigherIsBetter, Some(1.0), None, None, None, NmiMax, NmiMax),
        Fnmi => ("FNMI", InformationTheoretic, HigherIsBetter, Some(1.0), None, None, None, Fnmi, Fnmi),
        Vi => ("Variation of Information", InformationTheoretic, LowerIsBetter, Some(0.0), None, None, None, Vi, Vi),
        Ami => ("AMI", InformationTheoretic, HigherIsBetter, Some(1.0), None, Some(0.0), None, Ami, Ami),
        Smi => ("SMI", InformationTheoretic, HigherIsBetter, None, None, Some(0.0), None, Smi, Smi),
        FMeasure => ("FMeasure", SetMatching, HigherIsBetter, Some(1.0), None, None, None, FMeasure, FMeasure),
        BCubed => ("BCubed", SetMatching, HigherIsBetter, Some(1.0), None, None, None, BCubed, BCubed),
    };
    let needs_sampling = matches!(id, Ami | Smi);
    IndexDescriptor {
        id,
        name,
        family,
        direction,
        c_max,
        c_min,
        c_base,
        c_base_asymptotic: c_base_asym,
        equivalence_rep: rep,
        preference_class: pref,
        needs_sampling,
        linear_complexity: !needs_sampling,
    }
}

/// Every registered index.
pub fn index_registry() -> Vec<IndexDescriptor> {
    IndexId::ALL.iter().map(|&id| descriptor(id)).collect()
}

pub fn lookup(id: &str) -> Result<IndexDescriptor, IndexError> {
    Ok(descriptor(id.parse()?))
}

/// Why an index has no value on some input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Undefined {
    ZeroDenominator,
    /// Correlation of a trivial partition (`k = 1` or `k = n`) with a
    /// different partition.
    TrivialPartition,
    ZeroVariance,
}

impl fmt::Display for Undefined {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Undefined::ZeroDenominator => "zero denominator",
            Undefined::TrivialPartition => "trivial partition (zero marginal variance)",
            Undefined::ZeroVariance => "zero variance under random permutation",
        })
    }
}

/// An index value or an explicit undefined marker.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Score {
    Value(f64),
    Undefined(Undefined),
}

impl Score {
    pub fn value(self) -> Option<f64> {
        match self {
            Score::Value(v) => Some(v),
            Score::Undefined(_) => None,
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, Score::Value(_))
    }

    /// Unwraps a defined score; panics on the undefined marker.
    pub fn expect_value(self) -> f64 {
        match self {
            Score::Value(v) => v,
            Score::Undefined(u) => panic!("index undefined: {u}"),
        }
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Score::Value(v) => write!(f, "{v}"),
            Score::Undefined(u) => write!(f, "undefined ({u})"),
        }
    }
}

/// A score tagged with its index and, for sampled indices, Monte Carlo
/// metadata.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexScore {
    pub index: IndexId,
    pub score: Score,
    pub stderr: Option<f64>,
    pub samples: Option<usize>,
}

impl IndexScore {
    pub fn exact(index: IndexId, score: Score) -> Self {
        IndexScore {
            index,
            score,
            stderr: None,
            samples: None,
        }
    }

    pub fn value(&self) -> Option<f64> {
        self.score.value()
    }
}

/// Indices in the general-index property table, in row order.
pub const GENERAL_TABLE: [IndexId; 8] = [
    IndexId::Nmi,
    IndexId::NmiMax,
    IndexId::Fnmi,
    IndexId::Vi,
    IndexId::Smi,
    IndexId::FMeasure,
    IndexId::BCubed,
    IndexId::Ami,
];

/// Indices in the pair-counting property table, in row order.
pub const PAIR_TABLE: [IndexId; 8] = [
    IndexId::Rand,
    IndexId::AdjustedRand,
    IndexId::Jaccard,
    IndexId::Wallace1,
    IndexId::Dice,
    IndexId::CorrelationCoefficient,
    IndexId::SokalSneath1,
    IndexId::CorrelationDistance,
];

/// The thirteen indices compared in inconsistency experiments (duplicate
/// orderings Dice/CD and the costly SMI left out).
pub const INCONSISTENCY_SET: [IndexId; 13] = [
    IndexId::Nmi,
    IndexId::NmiMax,
    IndexId::Vi,
    IndexId::Fnmi,
    IndexId::Ami,
    IndexId::Rand,
    IndexId::AdjustedRand,
    IndexId::Jaccard,
    IndexId::Wallace1,
    IndexId::SokalSneath1,
    IndexId::CorrelationCoefficient,
    IndexId::FMeasure,
    IndexId::BCubed,
];

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeMap, BTreeSet, HashSet};

    #[test]
    fn registry_is_complete_and_unique() {
        let reg = index_registry();
        assert_eq!(reg.len(), 35);
        let pair = reg.iter().filter(|d| d.family == Family::PairCounting).count();
        assert_eq!(pair, 27);
        let ids: HashSet<_> = reg.iter().map(|d| d.id.as_str()).collect();
        assert_eq!(ids.len(), 35);
        for d in &reg {
            assert_eq!(d.id.as_str().parse::<IndexId>().unwrap(), d.id);
            let rep = descriptor(d.equivalence_rep);
            assert_eq!(rep.equivalence_rep, rep.id, "representatives are reflexive");
        }
    }

    #[test]
    fn equivalence_classes() {
        let mut classes: BTreeMap<IndexId, BTreeSet<IndexId>> = BTreeMap::new();
        for d in index_registry() {
            classes.entry(d.equivalence_rep).or_default().insert(d.id);
        }
        let nontrivial: Vec<BTreeSet<IndexId>> =
            classes.into_values().filter(|c| c.len() > 1).collect();
        use IndexId::*;
        let expected: Vec<BTreeSet<IndexId>> = vec![
            [Rand, Hubert, NormalizedMirkin].into_iter().collect(),
            [Jaccard, JaccardDistance].into_iter().collect(),
            [Wallace1, Wallace2].into_iter().collect(),
            [Kulczynski, McConnaughey].into_iter().collect(),
        ];
        assert_eq!(nontrivial, expected);
    }

    #[test]
    fn lookup_examples() {
        assert_eq!(lookup("hubert").unwrap().equivalence_rep, IndexId::Rand);
        assert_eq!(lookup("rand").unwrap().c_base, None);
        assert_eq!(lookup("sokal_sneath_1").unwrap().c_base, Some(0.5));
        assert!(matches!(lookup("nope"), Err(IndexError::UnknownIndex(_))));
        assert!(lookup(" Rand ").is_ok());
    }

    #[test]
    fn parse_list() {
        let v = IndexId::parse_list("rand, vi,,ami").unwrap();
        assert_eq!(v, vec![IndexId::Rand, IndexId::Vi, IndexId::Ami]);
        assert!(IndexId::parse_list("rand,bogus").is_err());
    }
}
