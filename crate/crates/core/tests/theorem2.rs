use partition_similarity::enumerate::enumerate_partitions;
use partition_similarity::moves::{is_consistent_improvement, reachable_by_perfect_moves};
use partition_similarity::stats::SeededGenerator;
use partition_similarity::Partition;
use rand::seq::SliceRandom;

/// Independent of the crate: B2 agrees with A on every pair B agrees on, and
/// B2 differs from B.
fn oracle(a: &Partition, b: &Partition, b2: &Partition) -> bool {
    let (a, b, b2) = (a.labels(), b.labels(), b2.labels());
    if b == b2 {
        return false;
    }
    (0..a.len()).all(|u| {
        (u + 1..a.len()).all(|v| {
            let x = a[u] == a[v];
            x != (b[u] == b[v]) || x == (b2[u] == b2[v])
        })
    })
}

#[test]
fn pairwise_definition_matches_reachability_exhaustive() {
    for n in 1..=5 {
        let ps: Vec<Partition> = enumerate_partitions(n).unwrap().collect();
        let mut improvements = 0usize;
        for a in &ps {
            for b in &ps {
                let reach = reachable_by_perfect_moves(a, b).unwrap();
                for b2 in &ps {
                    let expect = oracle(a, b, b2);
                    assert_eq!(is_consistent_improvement(a, b, b2).unwrap(), expect);
                    let reachable = b2 != b && reach.contains(b2);
                    assert_eq!(reachable, expect, "n={n} A={a:?} B={b:?} B2={b2:?}");
                    improvements += expect as usize;
                }
            }
        }
        if n >= 3 {
            assert!(improvements > 0);
        }
    }
}

#[test]
fn pairwise_definition_matches_reachability_sampled_n6() {
    let ps: Vec<Partition> = enumerate_partitions(6).unwrap().collect();
    let mut g = SeededGenerator::new(2, 0);
    for _ in 0..400 {
        let a = ps.choose(&mut g).unwrap();
        let b = ps.choose(&mut g).unwrap();
        let reach = reachable_by_perfect_moves(a, b).unwrap();
        for b2 in &ps {
            let expect = oracle(a, b, b2);
            assert_eq!(b2 != b && reach.contains(b2), expect);
            assert_eq!(is_consistent_improvement(a, b, b2).unwrap(), expect);
        }
    }
}
