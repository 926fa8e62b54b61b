use std::fmt;

use serde::Serialize;

use crate::contingency::PairCounts;
use crate::error::IndexError;
use crate::indices::{eval_pair_index, substituted_index, Evaluator, IndexId, Score};
use crate::partition::{ClusterSizeSpec, Partition};

use super::{exact_baseline_mean, Property, EQ_TOL, STRICT_TOL};

/// A concrete counterexample. Stored scores are raw index values; every
/// witness can be re-evaluated from scratch with [`Witness::recheck`].
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// `V(A1,A1) != V(A2,A2)`.
    SelfScores {
        a1: Partition,
        a2: Partition,
        v1: f64,
        v2: f64,
    },
    /// `V(A,B)` reaches the self-comparison value although `B != A`.
    AboveSelf {
        a: Partition,
        b: Partition,
        v_ab: f64,
        v_aa: f64,
    },
    Asymmetric {
        a: Partition,
        b: Partition,
        v_ab: Score,
        v_ba: Score,
    },
    /// `d(A,C) > d(A,B) + d(B,C)` with `d = c_max - V` on oriented scores.
    Triangle {
        a: Partition,
        b: Partition,
        c: Partition,
        d_ab: f64,
        d_bc: f64,
        d_ac: f64,
    },
    /// `B2` is a perfect split or merge of `B` w.r.t. `A`, yet the score does
    /// not strictly improve; `swapped` marks the `V(B, A)` argument order.
    NoImprovement {
        a: Partition,
        b: Partition,
        b2: Partition,
        swapped: bool,
        before: f64,
        after: f64,
    },
    /// Two points with `N11 = N00 = 0` and different values.
    MinNonConstant {
        p1: PairCounts,
        p2: PairCounts,
        v1: f64,
        v2: f64,
    },
    /// A point with `N11 + N00 > 0` not strictly above the minimum.
    MinNotStrict {
        at_min: PairCounts,
        other: PairCounts,
        v_min: f64,
        v_other: f64,
    },
    /// A unit step of one pair count that moves the score the wrong way.
    StrongStep {
        from: PairCounts,
        to: PairCounts,
        v_from: f64,
        v_to: f64,
    },
    BaselineMeans {
        a1: Partition,
        s1: ClusterSizeSpec,
        mean1: f64,
        a2: Partition,
        s2: ClusterSizeSpec,
        mean2: f64,
    },
    /// Two points of the substituted index with different values.
    GridValues {
        n: f64,
        m1: (f64, f64),
        v1: f64,
        m2: (f64, f64),
        v2: f64,
    },
    /// Failure implied by another property's violation.
    Inherited { from: Property },
    /// Known from the formula rather than from a search.
    Analytic { reason: String },
}

fn raw(e: &Evaluator, id: IndexId, a: &Partition, b: &Partition) -> Result<Option<f64>, IndexError> {
    Ok(e.score(id, a, b)?.value())
}

fn pair(id: IndexId, pc: &PairCounts) -> Result<Option<f64>, IndexError> {
    Ok(eval_pair_index(id, pc)?.value())
}

impl Witness {
    /// Re-evaluates the witness with the index module alone and reports
    /// whether it still demonstrates a violation. Inherited witnesses are
    /// re-checked through the property they point to by the caller.
    pub fn recheck(&self, id: IndexId, e: &Evaluator) -> Result<bool, IndexError> {
        let d = id.descriptor();
        let o = |v: f64| d.orient(v);
        Ok(match self {
            Witness::SelfScores { a1, a2, .. } => {
                match (raw(e, id, a1, a1)?, raw(e, id, a2, a2)?) {
                    (Some(x), Some(y)) => (x - y).abs() > EQ_TOL,
                    _ => false,
                }
            }
            Witness::AboveSelf { a, b, .. } => {
                match (raw(e, id, a, b)?, raw(e, id, a, a)?) {
                    (Some(ab), Some(aa)) => a != b && o(ab) > o(aa) - EQ_TOL,
                    _ => false,
                }
            }
            Witness::Asymmetric { a, b, .. } => {
                match (raw(e, id, a, b)?, raw(e, id, b, a)?) {
                    (Some(x), Some(y)) => (x - y).abs() > EQ_TOL,
                    (None, None) => false,
                    _ => true,
                }
            }
            Witness::Triangle { a, b, c, .. } => {
                let Some(cmax) = d.c_max.map(o) else {
                    return Ok(false);
                };
                let dist = |x: &Partition, y: &Partition| -> Result<Option<f64>, IndexError> {
                    Ok(raw(e, id, x, y)?.map(|v| cmax - o(v)))
                };
                match (dist(a, b)?, dist(b, c)?, dist(a, c)?) {
                    (Some(ab), Some(bc), Some(ac)) => ac > ab + bc + EQ_TOL,
                    _ => false,
                }
            }
            Witness::NoImprovement {
                a, b, b2, swapped, ..
            } => {
                let moves = crate::moves::perfect_moves(b, a)?;
                if !moves.contains(b2) {
                    return Ok(false);
                }
                let (before, after) = if *swapped {
                    (raw(e, id, b, a)?, raw(e, id, b2, a)?)
                } else {
                    (raw(e, id, a, b)?, raw(e, id, a, b2)?)
                };
                match (before, after) {
                    (Some(x), Some(y)) => o(y) - o(x) <= STRICT_TOL,
                    _ => false,
                }
            }
            Witness::MinNonConstant { p1, p2, .. } => {
                let at_min = |p: &PairCounts| p.n11 == 0 && p.n00 == 0;
                match (pair(id, p1)?, pair(id, p2)?) {
                    (Some(x), Some(y)) => at_min(p1) && at_min(p2) && (x - y).abs() > EQ_TOL,
                    _ => false,
                }
            }
            Witness::MinNotStrict { at_min, other, .. } => {
                match (pair(id, at_min)?, pair(id, other)?) {
                    (Some(m), Some(v)) => {
                        at_min.n11 + at_min.n00 == 0
                            && other.n11 + other.n00 > 0
                            && o(v) <= o(m) + EQ_TOL
                    }
                    _ => false,
                }
            }
            Witness::StrongStep { from, to, .. } => {
                let Some(dir) = step_direction(from, to) else {
                    return Ok(false);
                };
                match (pair(id, from)?, pair(id, to)?) {
                    (Some(x), Some(y)) => (o(y) - o(x)) * dir <= STRICT_TOL,
                    _ => false,
                }
            }
            Witness::BaselineMeans { a1, s1, a2, s2, .. } => {
                match (
                    exact_baseline_mean(id, a1, s1, e)?,
                    exact_baseline_mean(id, a2, s2, e)?,
                ) {
                    (Some(x), Some(y)) => (x - y).abs() > EQ_TOL,
                    _ => false,
                }
            }
            Witness::GridValues { n, m1, m2, .. } => {
                let v1 = substituted_index(id, m1.0, m1.1, *n)?.value();
                let v2 = substituted_index(id, m2.0, m2.1, *n)?.value();
                match (v1, v2) {
                    (Some(x), Some(y)) => (x - y).abs() > EQ_TOL,
                    _ => false,
                }
            }
            Witness::Inherited { .. } => true,
            Witness::Analytic { .. } => d.needs_sampling,
        })
    }
}

/// `+1` for a unit step in `N11` or `N00` (score should rise) taken where
/// `N10 + N01 > 0`, `-1` for a step in `N10` or `N01` (score should fall)
/// taken where `N11 + N00 > 0`.
pub(crate) fn step_direction(from: &PairCounts, to: &PairCounts) -> Option<f64> {
    let diff = [
        to.n11 as i64 - from.n11 as i64,
        to.n10 as i64 - from.n10 as i64,
        to.n01 as i64 - from.n01 as i64,
        to.n00 as i64 - from.n00 as i64,
    ];
    match diff {
        [1, 0, 0, 0] | [0, 0, 0, 1] if from.n10 + from.n01 > 0 => Some(1.0),
        [0, 1, 0, 0] | [0, 0, 1, 0] if from.n11 + from.n00 > 0 => Some(-1.0),
        _ => None,
    }
}

fn fmt_pc(p: &PairCounts) -> String {
    format!("({},{},{},{})", p.n11, p.n10, p.n01, p.n00)
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::SelfScores { a1, a2, v1, v2 } => {
                write!(f, "V(A,A) not constant: A={a1} gives {v1}, A={a2} gives {v2}")
            }
            Witness::AboveSelf { a, b, v_ab, v_aa } => {
                write!(f, "A={a} B={b}: V(A,B)={v_ab} reaches V(A,A)={v_aa}")
            }
            Witness::Asymmetric { a, b, v_ab, v_ba } => {
                write!(f, "A={a} B={b}: V(A,B)={v_ab} but V(B,A)={v_ba}")
            }
            Witness::Triangle {
                a, b, c, d_ab, d_bc, d_ac,
            } => write!(
                f,
                "A={a} B={b} C={c}: d(A,C)={d_ac} > d(A,B)+d(B,C)={d_ab}+{d_bc}"
            ),
            Witness::NoImprovement {
                a, b, b2, swapped, before, after,
            } => {
                let order = if *swapped { "V(B,A)" } else { "V(A,B)" };
                write!(f, "A={a} B={b} -> B'={b2}: {order} goes {before} -> {after}")
            }
            Witness::MinNonConstant { p1, p2, v1, v2 } => write!(
                f,
                "V{}={v1} but V{}={v2}",
                fmt_pc(p1),
                fmt_pc(p2)
            ),
            Witness::MinNotStrict {
                at_min, other, v_min, v_other,
            } => write!(
                f,
                "V{}={v_other} not above V{}={v_min}",
                fmt_pc(other),
                fmt_pc(at_min)
            ),
            Witness::StrongStep {
                from, to, v_from, v_to,
            } => write!(f, "V{}={v_from} -> V{}={v_to}", fmt_pc(from), fmt_pc(to)),
            Witness::BaselineMeans {
                a1, s1, mean1, a2, s2, mean2,
            } => write!(
                f,
                "E[V(A,B)] is {mean1} for A={a1}, S(B)={s1} but {mean2} for A={a2}, S(B)={s2}"
            ),
            Witness::GridValues { n, m1, v1, m2, v2 } => write!(
                f,
                "N={n}: V(s)({}, {})={v1} but V(s)({}, {})={v2}",
                m1.0, m1.1, m2.0, m2.1
            ),
            Witness::Inherited { from } => write!(f, "implied by {from} violation"),
            Witness::Analytic { reason } => f.write_str(reason),
        }
    }
}
