use serde::Serialize;

use crate::contingency::PairCounts;
use crate::error::IndexError;
use crate::indices::{eval_pair_index, substituted_index, IndexId};

use super::witness::step_direction;
use super::{Property, PropertyVerdict, Verdict, Witness, EQ_TOL, STRICT_TOL};

/// Pair-count totals of the substituted-index grids.
pub const GRID_TOTALS: [f64; 2] = [100.0, 10_000.0];
/// Grid resolution: `m = i N / GRID_STEPS` for `0 < i < GRID_STEPS`.
pub const GRID_STEPS: usize = 100;
/// Sign threshold for derivatives with respect to `p_B = m_B / N`.
pub const SLOPE_TOL: f64 = 1e-8;

fn value(id: IndexId, pc: &PairCounts) -> Result<Option<f64>, IndexError> {
    Ok(eval_pair_index(id, pc)?.value())
}

fn not_pair(id: IndexId, p: Property) -> Option<PropertyVerdict> {
    if id.is_pair_counting() {
        return None;
    }
    let mut v = PropertyVerdict::new(id, p, "");
    v.verdict = Verdict::NotApplicable {
        reason: "defined on pair counts only".into(),
    };
    Some(v)
}

/// All quadruples with `N11 + N10 + N01 + N00 = total`.
fn quadruples(total: u64) -> impl Iterator<Item = PairCounts> {
    (0..=total).flat_map(move |n11| {
        (0..=total - n11).flat_map(move |n10| {
            (0..=total - n11 - n10)
                .map(move |n01| PairCounts::new(n11, n10, n01, total - n11 - n10 - n01))
        })
    })
}

/// `V(0, N10, N01, 0)` is one constant for `N <= bound`, and every point
/// with `N11 + N00 > 0` and `N <= strict_bound` lies strictly above it.
pub(crate) fn min_agreement(id: IndexId, bound: u64, strict_bound: u64) -> PropertyVerdict {
    let p = Property::MinAgreement;
    if let Some(v) = not_pair(id, p) {
        return v;
    }
    let d = id.descriptor();
    let v = PropertyVerdict::new(
        id,
        p,
        format!("N <= {bound} (strictness N <= {strict_bound})"),
    );
    let mut c: Option<(PairCounts, f64)> = None;
    let mut run = || -> Result<PropertyVerdict, IndexError> {
        let mut v = v.clone();
        for total in 1..=bound {
            for n10 in 0..=total {
                let pc = PairCounts::new(0, n10, total - n10, 0);
                let Some(x) = value(id, &pc)? else {
                    v.skipped_undefined += 1;
                    continue;
                };
                match &c {
                    None => c = Some((pc, x)),
                    Some((p0, c0)) if (x - c0).abs() > EQ_TOL => {
                        return Ok(v.violated(Witness::MinNonConstant {
                            p1: *p0,
                            p2: pc,
                            v1: *c0,
                            v2: x,
                        }));
                    }
                    _ => {}
                }
            }
        }
        let Some((p0, c0)) = c else {
            v.verdict = Verdict::NotApplicable {
                reason: "undefined whenever N11 = N00 = 0".into(),
            };
            return Ok(v);
        };
        for total in 1..=strict_bound {
            for pc in quadruples(total).filter(|q| q.n11 + q.n00 > 0) {
                let Some(x) = value(id, &pc)? else {
                    v.skipped_undefined += 1;
                    continue;
                };
                if d.orient(x) <= d.orient(c0) + EQ_TOL {
                    return Ok(v.violated(Witness::MinNotStrict {
                        at_min: p0,
                        other: pc,
                        v_min: c0,
                        v_other: x,
                    }));
                }
            }
        }
        v.constant = Some(c0);
        Ok(v)
    };
    run().unwrap_or_else(|e| PropertyVerdict::error(id, p, e))
}

/// Unit steps in `N11`/`N00` raise the score where `N10 + N01 > 0`; unit
/// steps in `N10`/`N01` lower it where `N11 + N00 > 0`. Scans `N < bound`.
pub(crate) fn strong_monotonicity(id: IndexId, bound: u64) -> PropertyVerdict {
    let p = Property::StrongMonotonicity;
    if let Some(v) = not_pair(id, p) {
        return v;
    }
    let d = id.descriptor();
    let run = || -> Result<PropertyVerdict, IndexError> {
        let mut v = PropertyVerdict::new(id, p, format!("N <= {bound}"));
        for total in 1..bound {
            for from in quadruples(total) {
                let Some(x) = value(id, &from)? else {
                    v.skipped_undefined += 1;
                    continue;
                };
                let steps = [
                    PairCounts::new(from.n11 + 1, from.n10, from.n01, from.n00),
                    PairCounts::new(from.n11, from.n10, from.n01, from.n00 + 1),
                    PairCounts::new(from.n11, from.n10 + 1, from.n01, from.n00),
                    PairCounts::new(from.n11, from.n10, from.n01 + 1, from.n00),
                ];
                for to in steps {
                    let Some(dir) = step_direction(&from, &to) else {
                        continue;
                    };
                    let Some(y) = value(id, &to)? else {
                        v.skipped_undefined += 1;
                        continue;
                    };
                    if (d.orient(y) - d.orient(x)) * dir <= STRICT_TOL {
                        return Ok(v.violated(Witness::StrongStep {
                            from,
                            to,
                            v_from: x,
                            v_to: y,
                        }));
                    }
                }
            }
        }
        Ok(v)
    };
    run().unwrap_or_else(|e| PropertyVerdict::error(id, p, e))
}

fn grid_points(n: f64) -> impl Iterator<Item = (f64, f64)> {
    let step = n / GRID_STEPS as f64;
    (1..GRID_STEPS).flat_map(move |i| (1..GRID_STEPS).map(move |j| (i as f64 * step, j as f64 * step)))
}

/// `V^(s)(m_A, m_B)` is one constant over the interior grid.
pub(crate) fn asymptotic_baseline(id: IndexId) -> PropertyVerdict {
    let p = Property::ConstantBaselineAsymptotic;
    if let Some(v) = not_pair(id, p) {
        return v;
    }
    let run = || -> Result<PropertyVerdict, IndexError> {
        let mut v = PropertyVerdict::new(
            id,
            p,
            format!(
                "m in (0,N) step N/{GRID_STEPS}, N in {{{}}}",
                GRID_TOTALS.map(|x| x.to_string()).join(", ")
            ),
        );
        let mut c: Option<(f64, (f64, f64), f64)> = None;
        for n in GRID_TOTALS {
            for m in grid_points(n) {
                let Some(x) = substituted_index(id, m.0, m.1, n)?.value() else {
                    v.skipped_undefined += 1;
                    continue;
                };
                match c {
                    None => c = Some((n, m, x)),
                    Some((n0, m0, c0)) if (x - c0).abs() > EQ_TOL => {
                        // both points on the same N so the witness is self-contained
                        let (m1, v1) = if n0 == n {
                            (m0, c0)
                        } else {
                            let first = grid_points(n).next().unwrap();
                            let v1 = substituted_index(id, first.0, first.1, n)?.expect_value();
                            (first, v1)
                        };
                        return Ok(v.violated(Witness::GridValues {
                            n,
                            m1,
                            v1,
                            m2: m,
                            v2: x,
                        }));
                    }
                    _ => {}
                }
            }
        }
        v.constant = c.map(|(_, _, c0)| c0);
        Ok(v)
    };
    run().unwrap_or_else(|e| PropertyVerdict::error(id, p, e))
}

/// One numerical derivative of the substituted index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GradientSample {
    pub n: f64,
    pub m_a: f64,
    pub m_b: f64,
    /// `dV^(s)/dp_B` with `p_B = m_B / N`, oriented so positive means the
    /// score improves with more intra-cluster pairs in the candidate.
    pub slope: f64,
}

/// `pair_dec`: some point where the (oriented) substituted index grows with
/// `m_B`, i.e. favours candidates with fewer inter-cluster pairs;
/// `pair_inc`: some point where it shrinks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BiasClassification {
    pub pair_dec: bool,
    pub pair_inc: bool,
    pub witnesses: Vec<GradientSample>,
}

impl BiasClassification {
    pub fn label(&self) -> &'static str {
        match (self.pair_dec, self.pair_inc) {
            (true, true) => "both",
            (true, false) => "PairDec",
            (false, true) => "PairInc",
            (false, false) => "none",
        }
    }
}

/// Central differences with step `N / 10^4` over the interior grid.
pub(crate) fn classify_bias(id: IndexId) -> Result<BiasClassification, IndexError> {
    if !id.is_pair_counting() {
        return Err(IndexError::NotPairCounting(id.to_string()));
    }
    let d = id.descriptor();
    let mut out = BiasClassification {
        pair_dec: false,
        pair_inc: false,
        witnesses: Vec::new(),
    };
    for n in GRID_TOTALS {
        let h = n * 1e-4;
        for (m_a, m_b) in grid_points(n) {
            let up = substituted_index(id, m_a, m_b + h, n)?.value();
            let down = substituted_index(id, m_a, m_b - h, n)?.value();
            let (Some(up), Some(down)) = (up, down) else {
                continue;
            };
            let slope = (d.orient(up) - d.orient(down)) / (2.0 * h) * n;
            let sample = GradientSample { n, m_a, m_b, slope };
            if slope > SLOPE_TOL && !out.pair_dec {
                out.pair_dec = true;
                out.witnesses.push(sample);
            } else if slope < -SLOPE_TOL && !out.pair_inc {
                out.pair_inc = true;
                out.witnesses.push(sample);
            }
        }
    }
    Ok(out)
}

pub(crate) fn bias_verdict(id: IndexId) -> PropertyVerdict {
    let p = Property::Bias;
    match classify_bias(id) {
        Ok(b) => {
            let mut v = PropertyVerdict::new(
                id,
                p,
                format!("central differences, step N/10^4, N in {GRID_TOTALS:?}"),
            );
            v.verdict = Verdict::Bias(b);
            v
        }
        Err(e) => PropertyVerdict::error(id, p, e),
    }
}
