use std::f64::consts::PI;

use crate::contingency::{PairCounts, RealPairCounts};
use crate::error::IndexError;

use super::{IndexId, IndexScore, Score, Undefined};

/// Evaluates a pair-counting index on integer pair counts.
pub fn eval_pair_index(id: IndexId, pc: &PairCounts) -> Result<IndexScore, IndexError> {
    Ok(IndexScore::exact(id, pair_value(id, &pc.to_real())?))
}

/// Evaluates a pair-counting index on real-valued pair counts, such as
/// expected counts.
pub fn eval_pair_index_real(id: IndexId, pc: &RealPairCounts) -> Result<IndexScore, IndexError> {
    Ok(IndexScore::exact(id, pair_value(id, pc)?))
}

fn ratio(num: f64, den: f64) -> Score {
    if den == 0.0 {
        Score::Undefined(Undefined::ZeroDenominator)
    } else {
        Score::Value(num / den)
    }
}

fn map(s: Score, f: impl FnOnce(f64) -> f64) -> Score {
    match s {
        Score::Value(v) => Score::Value(f(v)),
        u => u,
    }
}

/// Correlation of the two pair-incidence vectors. Identical vectors give 1
/// even when a marginal variance vanishes.
fn correlation(pc: &RealPairCounts) -> Score {
    let RealPairCounts { n11, n10, n01, n00 } = *pc;
    if n10 == 0.0 && n01 == 0.0 {
        return Score::Value(1.0);
    }
    let den = (n11 + n10) * (n11 + n01) * (n00 + n10) * (n00 + n01);
    if den == 0.0 {
        return Score::Undefined(Undefined::TrivialPartition);
    }
    Score::Value(((n11 * n00 - n10 * n01) / den.sqrt()).clamp(-1.0, 1.0))
}

/// Evaluates a pair-counting index on (possibly fractional) pair counts.
pub(crate) fn pair_value(id: IndexId, pc: &RealPairCounts) -> Result<Score, IndexError> {
    use IndexId::*;
    let RealPairCounts { n11, n10, n01, n00 } = *pc;
    if [n11, n10, n01, n00].iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(IndexError::OutOfRange(format!(
            "({n11}, {n10}, {n01}, {n00})"
        )));
    }
    let n = n11 + n10 + n01 + n00;
    let (ma, mb) = (n11 + n10, n11 + n01);
    let cross = n11 * n00 - n10 * n01;
    let s = match id {
        Rand => ratio(n11 + n00, n),
        AdjustedRand => {
            let expected = ma * mb / n;
            ratio(n11 - expected, (ma + mb) / 2.0 - expected)
        }
        Jaccard => ratio(n11, n11 + n10 + n01),
        JaccardDistance => ratio(n10 + n01, n11 + n10 + n01),
        Wallace1 => ratio(n11, ma),
        Wallace2 => ratio(n11, mb),
        Dice => ratio(2.0 * n11, 2.0 * n11 + n10 + n01),
        CorrelationCoefficient => correlation(pc),
        CorrelationDistance => map(correlation(pc), |c| c.acos() / PI),
        SokalSneath1 => {
            let parts = [
                ratio(n11, ma),
                ratio(n11, mb),
                ratio(n00, n00 + n10),
                ratio(n00, n00 + n01),
            ];
            match parts.iter().map(|p| p.value()).collect::<Option<Vec<f64>>>() {
                Some(v) => Score::Value(v.iter().sum::<f64>() / 4.0),
                None => Score::Undefined(Undefined::ZeroDenominator),
            }
        }
        Minkowski => map(ratio(n10 + n01, ma), f64::sqrt),
        Hubert => ratio(n11 + n00 - n10 - n01, n),
        FowlkesMallows => ratio(n11, (ma * mb).sqrt()),
        SokalSneath2 => ratio(0.5 * n11, 0.5 * n11 + n10 + n01),
        NormalizedMirkin => ratio(n10 + n01, n),
        Kulczynski => match (ratio(n11, ma), ratio(n11, mb)) {
            (Score::Value(x), Score::Value(y)) => Score::Value((x + y) / 2.0),
            _ => Score::Undefined(Undefined::ZeroDenominator),
        },
        McConnaughey => ratio(n11 * n11 - n10 * n01, ma * mb),
        Yule => ratio(cross, n11 * n10 + n01 * n00),
        Baulieu1 => ratio(n * (n11 + n00) + (n10 - n01).powi(2), n * n),
        RussellRao => ratio(n11, n),
        FagerMcGowan => {
            if ma == 0.0 || mb == 0.0 {
                Score::Undefined(Undefined::ZeroDenominator)
            } else {
                Score::Value(n11 / (ma * mb).sqrt() - 1.0 / (2.0 * ma.sqrt()))
            }
        }
        Peirce => ratio(cross, mb * (n00 + n10)),
        Baulieu2 => ratio(cross, n * n),
        SokalSneath3 => ratio(
            n11 * n00,
            (ma * mb * (n00 + n10) * (n00 + n01)).sqrt(),
        ),
        GowerLegendre => ratio(n11 + n00, n11 + 0.5 * (n10 + n01) + n00),
        RogersTanimoto => ratio(n11 + n00, n11 + 2.0 * (n10 + n01) + n00),
        GoodmanKruskal => ratio(cross, n11 * n00 + n10 * n01),
        other => return Err(IndexError::NotPairCounting(other.to_string())),
    };
    Ok(s)
}
