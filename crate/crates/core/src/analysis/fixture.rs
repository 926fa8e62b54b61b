//! Bundled synthetic reference clustering for the scan experiments.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::partition::Partition;
use crate::stats::SeededGenerator;

pub const FIXTURE_N: usize = 924;
pub const FIXTURE_CLUSTERS: usize = 431;
pub const FIXTURE_SINGLETONS: usize = 305;
pub const FIXTURE_SEED: u64 = 924_431;

const FIXTURE_TEXT: &str = include_str!("../../fixtures/reference_924.txt");

/// Cluster sizes: 305 singletons and 126 clusters of size at least two; the
/// remaining elements go one at a time to a uniformly chosen large cluster.
/// Elements are then assigned to clusters in random order.
pub fn synthetic_reference(n: usize, clusters: usize, singletons: usize, seed: u64) -> Option<Partition> {
    let large = clusters.checked_sub(singletons)?;
    let base = singletons + 2 * large;
    if n < base || (large == 0 && n != singletons) {
        return None;
    }
    let mut rng = SeededGenerator::new(seed, 0x6678);
    let mut sizes = vec![1usize; singletons];
    let mut big = vec![2usize; large];
    for _ in 0..n - base {
        let i = rng.gen_range(0..large);
        big[i] += 1;
    }
    sizes.extend(big);
    let mut labels: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(c, &s)| std::iter::repeat(c).take(s))
        .collect();
    labels.shuffle(&mut rng);
    Partition::from_labels(&labels).ok()
}

/// The shipped reference: n = 924, 431 clusters, 305 singletons.
pub fn reference_fixture() -> Partition {
    Partition::parse_text(FIXTURE_TEXT).expect("bundled fixture parses")
}

/// File contents the fixture is regenerated from.
pub fn fixture_text() -> String {
    let p = synthetic_reference(FIXTURE_N, FIXTURE_CLUSTERS, FIXTURE_SINGLETONS, FIXTURE_SEED)
        .expect("fixture shape is feasible");
    format!(
        "# synthetic reference: n={FIXTURE_N}, {FIXTURE_CLUSTERS} clusters, {FIXTURE_SINGLETONS} singletons, seed={FIXTURE_SEED}\n{}",
        p.to_text()
    )
}
