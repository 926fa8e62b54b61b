use partition_similarity::{Evaluator, IndexId, Partition};
use proptest::prelude::*;

fn labels(max_n: usize) -> impl Strategy<Value = Vec<u8>> {
    (2..=max_n).prop_flat_map(|n| prop::collection::vec(0u8..6, n))
}

fn two(max_n: usize) -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
    (2..=max_n).prop_flat_map(|n| {
        (prop::collection::vec(0u8..6, n), prop::collection::vec(0u8..6, n))
    })
}

proptest! {
    #[test]
    fn text_round_trip(ls in labels(40)) {
        let p = Partition::from_labels(&ls).unwrap();
        let q = Partition::parse_text(&p.to_text()).unwrap();
        prop_assert_eq!(&q, &p);
        prop_assert_eq!(Partition::parse_text(&q.to_text()).unwrap(), p);
    }

    #[test]
    fn relabeling_does_not_change_the_partition(ls in labels(30)) {
        let shifted: Vec<u32> = ls.iter().map(|&l| 100 - l as u32).collect();
        prop_assert_eq!(Partition::from_labels(&ls).unwrap(), Partition::from_labels(&shifted).unwrap());
    }

    #[test]
    fn symmetric_indices_are_symmetric((la, lb) in two(12)) {
        let a = Partition::from_labels(&la).unwrap();
        let b = Partition::from_labels(&lb).unwrap();
        let e = Evaluator::exact();
        for id in [IndexId::Rand, IndexId::AdjustedRand, IndexId::Jaccard, IndexId::CorrelationCoefficient,
                   IndexId::SokalSneath1, IndexId::Nmi, IndexId::Vi, IndexId::FMeasure, IndexId::BCubed] {
            let x = e.score(id, &a, &b).unwrap().value();
            let y = e.score(id, &b, &a).unwrap().value();
            match (x, y) {
                (Some(x), Some(y)) => prop_assert!((x - y).abs() < 1e-12, "{}", id),
                (x, y) => prop_assert_eq!(x.is_none(), y.is_none()),
            }
        }
    }

    #[test]
    fn bounded_indices_stay_in_range((la, lb) in two(12)) {
        let a = Partition::from_labels(&la).unwrap();
        let b = Partition::from_labels(&lb).unwrap();
        let e = Evaluator::exact();
        for id in [IndexId::Rand, IndexId::Jaccard, IndexId::Wallace1, IndexId::Dice,
                   IndexId::CorrelationDistance, IndexId::SokalSneath1, IndexId::Nmi,
                   IndexId::NmiMax, IndexId::FMeasure, IndexId::BCubed] {
            if let Some(v) = e.score(id, &a, &b).unwrap().value() {
                prop_assert!((-1e-12..=1.0 + 1e-12).contains(&v), "{} = {}", id, v);
            }
        }
        for id in [IndexId::AdjustedRand, IndexId::CorrelationCoefficient] {
            if let Some(v) = e.score(id, &a, &b).unwrap().value() {
                prop_assert!(v <= 1.0 + 1e-12, "{} = {}", id, v);
            }
        }
    }

    #[test]
    fn element_permutation_preserves_scores((la, lb) in two(10), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let a = Partition::from_labels(&la).unwrap();
        let b = Partition::from_labels(&lb).unwrap();
        let mut perm: Vec<usize> = (0..a.n()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let e = Evaluator::exact();
        for &id in IndexId::ALL {
            let x = e.score(id, &a, &b).unwrap().value();
            let y = e.score(id, &a.permuted(&perm), &b.permuted(&perm)).unwrap().value();
            match (x, y) {
                (Some(x), Some(y)) => prop_assert!((x - y).abs() < 1e-9, "{}", id),
                (x, y) => prop_assert_eq!(x.is_none(), y.is_none()),
            }
        }
    }
}
