//! Browser bindings: score two clusterings, trace the substituted pair-count
//! index, and run a small k-scan. Results cross the boundary as JSON strings.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use partition_similarity::analysis::k_scan as run_k_scan;
use partition_similarity::indices::substituted_index;
use partition_similarity::{ClusterSizeSpec, Evaluator, IndexId, Partition, SamplingConfig};

const MI_SAMPLES: usize = 500;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn parse_labels(text: &str) -> Result<Partition, String> {
    let labels: Vec<&str> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect();
    Partition::from_labels(&labels).map_err(err)
}

fn evaluator(n: usize, seed: u64) -> Evaluator {
    if n <= 10 {
        Evaluator::exact()
    } else {
        Evaluator::new(Some(SamplingConfig::monte_carlo(MI_SAMPLES, seed)))
    }
}

#[derive(Serialize)]
struct Row {
    index: IndexId,
    name: &'static str,
    value: Option<f64>,
    higher_is_better: bool,
}

/// Every index for two label lists (comma or whitespace separated).
pub fn score_all_json(reference: &str, candidate: &str) -> Result<String, String> {
    let a = parse_labels(reference)?;
    let b = parse_labels(candidate)?;
    let scores = evaluator(a.n(), 0).scores(IndexId::ALL, &a, &b).map_err(err)?;
    let rows: Vec<Row> = scores
        .iter()
        .map(|s| {
            let d = s.index.descriptor();
            Row {
                index: s.index,
                name: d.name,
                value: s.value(),
                higher_is_better: d.higher_is_better(),
            }
        })
        .collect();
    serde_json::to_string(&rows).map_err(err)
}

/// `V^(s)(m_A, m_B)` for `m_B = N/steps .. N(steps-1)/steps` at fixed
/// `m_A = p_a N`; `null` where undefined.
pub fn substituted_curve_json(index: &str, p_a: f64, steps: usize) -> Result<String, String> {
    let id: IndexId = index.parse().map_err(err)?;
    let n = 10_000.0;
    let steps = steps.max(2);
    let pts: Vec<(f64, Option<f64>)> = (1..steps)
        .map(|i| {
            let p_b = i as f64 / steps as f64;
            substituted_index(id, p_a * n, p_b * n, n).map(|s| (p_b, s.value()))
        })
        .collect::<Result<_, _>>()
        .map_err(err)?;
    serde_json::to_string(&pts).map_err(err)
}

/// Mean and 5%/95% band of `index` between a balanced reference with
/// `k_ref` clusters on `n` elements and random balanced clusterings.
pub fn k_scan_json(
    index: &str,
    n: usize,
    k_ref: usize,
    k_values: &str,
    samples: usize,
    seed: u64,
) -> Result<String, String> {
    let id: IndexId = index.parse().map_err(err)?;
    let ks: Vec<usize> = k_values
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(err))
        .collect::<Result<_, _>>()?;
    let a = ClusterSizeSpec::balanced(n, k_ref).map_err(err)?.block_partition();
    let curve = run_k_scan(&a, &ks, samples, &[id], seed, &evaluator(n, seed)).map_err(err)?;
    serde_json::to_string(&curve.points).map_err(err)
}

#[wasm_bindgen]
pub fn score_all(reference: &str, candidate: &str) -> Result<String, JsError> {
    score_all_json(reference, candidate).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn substituted_curve(index: &str, p_a: f64, steps: usize) -> Result<String, JsError> {
    substituted_curve_json(index, p_a, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn k_scan(
    index: &str,
    n: usize,
    k_ref: usize,
    k_values: &str,
    samples: usize,
    seed: u64,
) -> Result<String, JsError> {
    k_scan_json(index, n, k_ref, k_values, samples, seed).map_err(|e| JsError::new(&e))
}
