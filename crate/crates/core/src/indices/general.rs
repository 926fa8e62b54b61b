//! Entropy-based and set-matching indices on a contingency table.

use crate::contingency::ContingencyTable;

use super::{Score, Undefined};

/// Ratios below this are treated as vanishing denominators.
pub(crate) const DEGENERATE: f64 = 1e-12;

pub(crate) struct Entropies {
    pub ha: f64,
    pub hb: f64,
    pub hab: f64,
    pub mi: f64,
}

impl Entropies {
    pub fn of(table: &ContingencyTable) -> Self {
        let ha = table.row_entropy();
        let hb = table.col_entropy();
        let hab = table.joint_entropy();
        Entropies {
            ha,
            hb,
            hab,
            mi: (ha + hb - hab).max(0.0),
        }
    }
}

pub(crate) fn nmi(e: &Entropies) -> Score {
    let den = (e.ha + e.hb) / 2.0;
    if den == 0.0 {
        // both partitions are a single cluster, hence equal
        return Score::Value(1.0);
    }
    Score::Value(e.mi / den)
}

pub(crate) fn nmi_max(e: &Entropies) -> Score {
    let den = e.ha.max(e.hb);
    if den == 0.0 {
        return Score::Value(1.0);
    }
    Score::Value(e.mi / den)
}

pub(crate) fn fnmi(e: &Entropies, ka: usize, kb: usize) -> Score {
    let penalty = (-(ka.abs_diff(kb) as f64) / ka as f64).exp();
    match nmi(e) {
        Score::Value(v) => Score::Value(penalty * v),
        u => u,
    }
}

pub(crate) fn vi(e: &Entropies) -> Score {
    Score::Value((2.0 * e.hab - e.ha - e.hb).max(0.0))
}

pub(crate) fn ami(e: &Entropies, expected: f64) -> Score {
    if e.ha == 0.0 && e.hb == 0.0 {
        return Score::Value(1.0);
    }
    let den = (e.ha * e.hb).sqrt() - expected;
    if den.abs() < DEGENERATE {
        return Score::Undefined(Undefined::ZeroDenominator);
    }
    Score::Value((e.mi - expected) / den)
}

pub(crate) fn smi(e: &Entropies, expected: f64, std: f64) -> Score {
    if std < DEGENERATE {
        return Score::Undefined(Undefined::ZeroVariance);
    }
    Score::Value((e.mi - expected) / std)
}

fn harmonic(x: f64, y: f64) -> f64 {
    if x + y == 0.0 {
        0.0
    } else {
        2.0 * x * y / (x + y)
    }
}

/// Per-row and per-column maxima of the table.
fn maxima(table: &ContingencyTable) -> (Vec<usize>, Vec<usize>) {
    let mut rows = vec![0; table.row_sums().len()];
    let mut cols = vec![0; table.col_sums().len()];
    for &((i, j), c) in table.entries() {
        rows[i as usize] = rows[i as usize].max(c);
        cols[j as usize] = cols[j as usize].max(c);
    }
    (rows, cols)
}

pub(crate) fn fmeasure(table: &ContingencyTable) -> Score {
    let n = table.n() as f64;
    let (rows, cols) = maxima(table);
    let recall = rows.iter().sum::<usize>() as f64 / n;
    let precision = cols.iter().sum::<usize>() as f64 / n;
    Score::Value(harmonic(recall, precision))
}

pub(crate) fn bcubed(table: &ContingencyTable) -> Score {
    let n = table.n() as f64;
    let (mut recall, mut precision) = (0.0, 0.0);
    for &((i, j), c) in table.entries() {
        let sq = (c * c) as f64;
        recall += sq / table.row_sums()[i as usize] as f64;
        precision += sq / table.col_sums()[j as usize] as f64;
    }
    Score::Value(harmonic(recall / n, precision / n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;
    use approx::assert_abs_diff_eq;

    fn pc(clusters: &[&[usize]]) -> Partition {
        let v: Vec<Vec<usize>> = clusters.iter().map(|c| c.to_vec()).collect();
        Partition::from_clusters(&v).unwrap()
    }

    fn table(a: &Partition, b: &Partition) -> ContingencyTable {
        ContingencyTable::new(a, b).unwrap()
    }

    #[test]
    fn fmeasure_example() {
        let a = Partition::single_cluster(7);
        let b = pc(&[&[0, 1, 2, 3], &[4, 5], &[6]]);
        let v = fmeasure(&table(&a, &b)).expect_value();
        assert_abs_diff_eq!(v, 8.0 / 11.0, epsilon = 1e-15);
        let merged = pc(&[&[0, 1, 2, 3], &[4, 5, 6]]);
        assert_abs_diff_eq!(fmeasure(&table(&a, &merged)).expect_value(), v, epsilon = 1e-15);
    }

    #[test]
    fn bcubed_examples() {
        let a = Partition::single_cluster(3);
        let b = pc(&[&[0, 1], &[2]]);
        let c = Partition::singletons(3);
        assert_abs_diff_eq!(bcubed(&table(&a, &c)).expect_value(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(bcubed(&table(&a, &b)).expect_value(), 10.0 / 14.0, epsilon = 1e-15);
        assert_abs_diff_eq!(bcubed(&table(&b, &c)).expect_value(), 0.8, epsilon = 1e-15);
    }

    #[test]
    fn fnmi_example() {
        let a = pc(&[&[0, 1], &[2], &[3]]);
        let b = pc(&[&[0], &[1], &[2, 3]]);
        let merged = pc(&[&[0, 1], &[2, 3]]);
        let v = fnmi(&Entropies::of(&table(&a, &b)), 3, 3).expect_value();
        let w = fnmi(&Entropies::of(&table(&a, &merged)), 3, 2).expect_value();
        assert!((v - 0.67).abs() < 0.01, "{v}");
        assert!((w - 0.57).abs() < 0.01, "{w}");
    }

    #[test]
    fn nmi_degenerate() {
        let one = Partition::single_cluster(4);
        let e = Entropies::of(&table(&one, &one));
        assert_eq!(nmi(&e), Score::Value(1.0));
        assert_eq!(nmi_max(&e), Score::Value(1.0));
        assert_eq!(vi(&e), Score::Value(0.0));
    }
}
