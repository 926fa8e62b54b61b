use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::enumerate::{enumerate_partitions, ENUMERATION_GUARD};
use crate::indices::{Evaluator, IndexId};
use crate::moves::perfect_moves;
use crate::partition::{ClusterSizeSpec, Partition};

use super::{Property, PropertyVerdict, Witness, EQ_TOL, STRICT_TOL};

/// All partitions of one `n`, with lookup and the perfect-move graph.
struct Universe {
    parts: Vec<Partition>,
    index: HashMap<Partition, usize>,
    spec_of: Vec<usize>,
    specs: Vec<ClusterSizeSpec>,
    // (reference, candidate, improved candidate) for 1 < k_ref < n
    moves: OnceLock<Vec<(u32, u32, u32)>>,
}

impl Universe {
    fn new(n: usize) -> Self {
        let parts: Vec<Partition> = enumerate_partitions(n).expect("n within guard").collect();
        let index = parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut specs: Vec<ClusterSizeSpec> = Vec::new();
        let mut spec_of = Vec::with_capacity(parts.len());
        for p in &parts {
            let s = p.size_spec();
            let pos = match specs.iter().position(|x| *x == s) {
                Some(pos) => pos,
                None => {
                    specs.push(s);
                    specs.len() - 1
                }
            };
            spec_of.push(pos);
        }
        Universe {
            parts,
            index,
            spec_of,
            specs,
            moves: OnceLock::new(),
        }
    }

    fn len(&self) -> usize {
        self.parts.len()
    }

    fn moves(&self) -> &[(u32, u32, u32)] {
        self.moves.get_or_init(|| {
            let n = self.parts[0].n();
            let per_ref: Vec<Vec<(u32, u32, u32)>> = (0..self.len())
                .into_par_iter()
                .map(|ai| {
                    let a = &self.parts[ai];
                    let mut out = Vec::new();
                    if a.k() <= 1 || a.k() >= n {
                        return out;
                    }
                    for (bi, b) in self.parts.iter().enumerate() {
                        for b2 in perfect_moves(b, a).expect("same n") {
                            out.push((ai as u32, bi as u32, self.index[&b2] as u32));
                        }
                    }
                    out
                })
                .collect();
            per_ref.into_iter().flatten().collect()
        })
    }
}

/// Raw scores `V(P_i, P_j)` for all partitions of one `n`.
struct ScoreTable {
    len: usize,
    values: Vec<Option<f64>>,
}

impl ScoreTable {
    fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.values[i * self.len + j]
    }
}

/// Shared state for exhaustive checks: the partition universes and score
/// tables are computed once per `n` (and index) and reused by every
/// property. Permutation-model indices are always evaluated exactly.
pub struct Checker {
    evaluator: Evaluator,
    universes: Mutex<HashMap<usize, Arc<Universe>>>,
    tables: Mutex<HashMap<(IndexId, usize), Arc<ScoreTable>>>,
}

impl Default for Checker {
    fn default() -> Self {
        Checker::new()
    }
}

type Table = Result<Arc<ScoreTable>, String>;

impl Checker {
    pub fn new() -> Self {
        Checker {
            evaluator: Evaluator::exact(),
            universes: Mutex::default(),
            tables: Mutex::default(),
        }
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.evaluator
    }

    fn universe(&self, n: usize) -> Arc<Universe> {
        if let Some(u) = self.universes.lock().unwrap().get(&n) {
            return u.clone();
        }
        let u = Arc::new(Universe::new(n));
        self.universes
            .lock()
            .unwrap()
            .entry(n)
            .or_insert(u)
            .clone()
    }

    fn table(&self, id: IndexId, n: usize) -> Table {
        if let Some(t) = self.tables.lock().unwrap().get(&(id, n)) {
            return Ok(t.clone());
        }
        let u = self.universe(n);
        let rows: Result<Vec<Vec<Option<f64>>>, String> = u
            .parts
            .par_iter()
            .map(|a| {
                u.parts
                    .iter()
                    .map(|b| {
                        self.evaluator
                            .score(id, a, b)
                            .map(|s| s.value())
                            .map_err(|e| e.to_string())
                    })
                    .collect()
            })
            .collect();
        let t = Arc::new(ScoreTable {
            len: u.len(),
            values: rows?.into_iter().flatten().collect(),
        });
        Ok(self
            .tables
            .lock()
            .unwrap()
            .entry((id, n))
            .or_insert(t)
            .clone())
    }

    fn sizes(n_max: usize) -> std::ops::RangeInclusive<usize> {
        2..=n_max.min(ENUMERATION_GUARD)
    }

    /// `V(A,A)` is one constant and `V(A,B)` stays strictly below it for
    /// every `B != A`.
    pub fn max_agreement(&self, id: IndexId, n_max: usize) -> PropertyVerdict {
        let p = Property::MaxAgreement;
        let d = id.descriptor();
        let mut v = PropertyVerdict::new(id, p, format!("n <= {n_max}"));
        let mut c: Option<(Partition, f64)> = None;
        for n in Self::sizes(n_max) {
            let u = self.universe(n);
            let t = match self.table(id, n) {
                Ok(t) => t,
                Err(e) => return PropertyVerdict::error(id, p, e),
            };
            for i in 0..u.len() {
                let Some(x) = t.get(i, i) else {
                    v.skipped_undefined += 1;
                    continue;
                };
                match &c {
                    None => c = Some((u.parts[i].clone(), x)),
                    Some((a0, c0)) if (x - c0).abs() > EQ_TOL => {
                        return v.violated(Witness::SelfScores {
                            a1: a0.clone(),
                            a2: u.parts[i].clone(),
                            v1: *c0,
                            v2: x,
                        });
                    }
                    _ => {}
                }
            }
            let Some((_, c0)) = c else { continue };
            for i in 0..u.len() {
                for j in 0..u.len() {
                    if i == j {
                        continue;
                    }
                    let Some(x) = t.get(i, j) else {
                        v.skipped_undefined += 1;
                        continue;
                    };
                    if d.orient(x) > d.orient(c0) - EQ_TOL {
                        return v.violated(Witness::AboveSelf {
                            a: u.parts[i].clone(),
                            b: u.parts[j].clone(),
                            v_ab: x,
                            v_aa: c0,
                        });
                    }
                }
            }
        }
        v.constant = c.map(|(_, c0)| c0);
        v
    }

    pub fn symmetry(&self, id: IndexId, n_max: usize) -> PropertyVerdict {
        let p = Property::Symmetry;
        let mut v = PropertyVerdict::new(id, p, format!("n <= {n_max}"));
        for n in Self::sizes(n_max) {
            let u = self.universe(n);
            let t = match self.table(id, n) {
                Ok(t) => t,
                Err(e) => return PropertyVerdict::error(id, p, e),
            };
            for i in 0..u.len() {
                for j in i + 1..u.len() {
                    let (x, y) = (t.get(i, j), t.get(j, i));
                    let asym = match (x, y) {
                        (Some(x), Some(y)) => (x - y).abs() > EQ_TOL,
                        (None, None) => {
                            v.skipped_undefined += 1;
                            false
                        }
                        _ => true,
                    };
                    if asym {
                        let score = |s: Option<f64>| match s {
                            Some(x) => crate::indices::Score::Value(x),
                            None => crate::indices::Score::Undefined(
                                crate::indices::Undefined::ZeroDenominator,
                            ),
                        };
                        return v.violated(Witness::Asymmetric {
                            a: u.parts[i].clone(),
                            b: u.parts[j].clone(),
                            v_ab: score(x),
                            v_ba: score(y),
                        });
                    }
                }
            }
        }
        v
    }

    /// Triangle inequality for `d = c_max - V` (oriented). Requires symmetry
    /// and maximal agreement; their failure is inherited.
    pub fn distance(&self, id: IndexId, n_max: usize) -> PropertyVerdict {
        let p = Property::Distance;
        let mut v = PropertyVerdict::new(id, p, format!("n <= {n_max}"));
        let max = self.max_agreement(id, n_max);
        let sym = self.symmetry(id, n_max);
        for prereq in [&max, &sym] {
            match prereq.holds() {
                Some(true) => {}
                Some(false) => {
                    return v.violated(Witness::Inherited {
                        from: prereq.property,
                    })
                }
                None => return PropertyVerdict::error(id, p, "prerequisite check failed"),
            }
        }
        let d = id.descriptor();
        let Some(cmax) = max.constant.map(|c| d.orient(c)) else {
            return PropertyVerdict::error(id, p, "no defined self-comparison");
        };
        for n in Self::sizes(n_max) {
            let u = self.universe(n);
            let t = match self.table(id, n) {
                Ok(t) => t,
                Err(e) => return PropertyVerdict::error(id, p, e),
            };
            let len = u.len();
            let dist: Vec<f64> = t
                .values
                .iter()
                .map(|x| x.map_or(f64::NAN, |x| cmax - d.orient(x)))
                .collect();
            let found = (0..len).into_par_iter().find_first(|&a| {
                (0..len).any(|b| {
                    let ab = dist[a * len + b];
                    !ab.is_nan()
                        && (0..len).any(|c| {
                            let (bc, ac) = (dist[b * len + c], dist[a * len + c]);
                            !bc.is_nan() && !ac.is_nan() && ac > ab + bc + EQ_TOL
                        })
                })
            });
            if let Some(a) = found {
                for b in 0..len {
                    for c in 0..len {
                        let (ab, bc, ac) =
                            (dist[a * len + b], dist[b * len + c], dist[a * len + c]);
                        if !(ab.is_nan() || bc.is_nan() || ac.is_nan()) && ac > ab + bc + EQ_TOL {
                            return v.violated(Witness::Triangle {
                                a: u.parts[a].clone(),
                                b: u.parts[b].clone(),
                                c: u.parts[c].clone(),
                                d_ab: ab,
                                d_bc: bc,
                                d_ac: ac,
                            });
                        }
                    }
                }
            }
            v.skipped_undefined += dist.iter().filter(|x| x.is_nan()).count();
        }
        v
    }

    /// Every perfect split and merge strictly improves the score in both
    /// argument orders, for references with `1 < k < n`.
    pub fn monotonicity(&self, id: IndexId, n_max: usize) -> PropertyVerdict {
        let p = Property::Monotonicity;
        let d = id.descriptor();
        let mut v = PropertyVerdict::new(id, p, format!("n <= {n_max}"));
        for n in Self::sizes(n_max) {
            let u = self.universe(n);
            let t = match self.table(id, n) {
                Ok(t) => t,
                Err(e) => return PropertyVerdict::error(id, p, e),
            };
            for &(a, b, b2) in u.moves() {
                let (a, b, b2) = (a as usize, b as usize, b2 as usize);
                for swapped in [false, true] {
                    let (before, after) = if swapped {
                        (t.get(b, a), t.get(b2, a))
                    } else {
                        (t.get(a, b), t.get(a, b2))
                    };
                    let (Some(x), Some(y)) = (before, after) else {
                        v.skipped_undefined += 1;
                        continue;
                    };
                    if d.orient(y) - d.orient(x) <= STRICT_TOL {
                        return v.violated(Witness::NoImprovement {
                            a: u.parts[a].clone(),
                            b: u.parts[b].clone(),
                            b2: u.parts[b2].clone(),
                            swapped,
                            before: x,
                            after: y,
                        });
                    }
                }
            }
        }
        v
    }

    /// The mean of `V(A,B)` over each size class of `B` is one constant for
    /// every reference with `1 < k < n`. Size classes where the index is
    /// undefined for some member are skipped.
    pub fn constant_baseline_exact(&self, id: IndexId, n_max: usize) -> PropertyVerdict {
        let p = Property::ConstantBaselineExact;
        let mut v = PropertyVerdict::new(id, p, format!("n <= {n_max}"));
        let mut c: Option<(Partition, ClusterSizeSpec, f64)> = None;
        for n in Self::sizes(n_max) {
            let u = self.universe(n);
            let t = match self.table(id, n) {
                Ok(t) => t,
                Err(e) => return PropertyVerdict::error(id, p, e),
            };
            for a in 0..u.len() {
                let k = u.parts[a].k();
                if k <= 1 || k >= n {
                    continue;
                }
                let mut sums = vec![0.0; u.specs.len()];
                let mut counts = vec![0usize; u.specs.len()];
                let mut undefined = vec![false; u.specs.len()];
                for b in 0..u.len() {
                    let s = u.spec_of[b];
                    match t.get(a, b) {
                        Some(x) => {
                            sums[s] += x;
                            counts[s] += 1;
                        }
                        None => undefined[s] = true,
                    }
                }
                for s in 0..u.specs.len() {
                    if undefined[s] {
                        v.skipped_undefined += 1;
                        continue;
                    }
                    let mean = sums[s] / counts[s] as f64;
                    match &c {
                        None => c = Some((u.parts[a].clone(), u.specs[s].clone(), mean)),
                        Some((a0, s0, m0)) if (mean - m0).abs() > EQ_TOL => {
                            return v.violated(Witness::BaselineMeans {
                                a1: a0.clone(),
                                s1: s0.clone(),
                                mean1: *m0,
                                a2: u.parts[a].clone(),
                                s2: u.specs[s].clone(),
                                mean2: mean,
                            });
                        }
                        _ => {}
                    }
                }
            }
        }
        v.constant = c.map(|(_, _, m)| m);
        v
    }
}
