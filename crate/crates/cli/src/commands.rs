use std::path::{Path, PathBuf};

use serde::Serialize;

use partition_similarity::analysis::{
    analyze_triplet, baseline_suite, default_k_values, default_s_values, find_inconsistency_cover,
    inconsistency_matrix, k_scan as run_k_scan, reference_fixture, s_scan as run_s_scan,
    CoverBudget, ExperimentCurve, SuiteConfig,
};
use partition_similarity::indices::{IndexId, Score, GENERAL_TABLE, INCONSISTENCY_SET, PAIR_TABLE};
use partition_similarity::properties::{property_matrix, Budget, Property, Verdict};
use partition_similarity::{Evaluator, Partition, SamplingConfig};

use crate::output::{emit, num, Format, Table};
use crate::{CliError, Common};

/// Largest `n` for which AMI/SMI expectations are enumerated exactly.
const EXACT_MI_MAX: usize = 10;
const DEFAULT_MI_SAMPLES: usize = 2000;

fn ids_or(c: &Common, default: &[IndexId]) -> Result<Vec<IndexId>, CliError> {
    match &c.indices {
        None => Ok(default.to_vec()),
        Some(s) => IndexId::parse_list(s).map_err(|e| {
            let known: Vec<&str> = IndexId::ALL.iter().map(|i| i.as_str()).collect();
            CliError::Usage(format!("{e}; available: {}", known.join(", ")))
        }),
    }
}

fn read_partition(p: &Path) -> Result<Partition, CliError> {
    let text =
        std::fs::read_to_string(p).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?;
    Partition::parse_text(&text).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))
}

fn same_n(a: &Partition, b: &Partition, path: &Path) -> Result<(), CliError> {
    if a.n() != b.n() {
        return Err(CliError::Data(format!(
            "{}: {} elements but the reference has {}",
            path.display(),
            b.n(),
            a.n()
        )));
    }
    Ok(())
}

fn evaluator(c: &Common, n: usize) -> Evaluator {
    if n <= EXACT_MI_MAX {
        Evaluator::exact()
    } else {
        Evaluator::new(Some(SamplingConfig::monte_carlo(
            c.samples.unwrap_or(DEFAULT_MI_SAMPLES),
            c.seed,
        )))
    }
}

fn data<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Data(e.to_string())
}

fn direction(id: IndexId) -> &'static str {
    if id.descriptor().higher_is_better() {
        "higher"
    } else {
        "lower"
    }
}

#[derive(Serialize)]
struct ScoreRow {
    index: IndexId,
    value: Option<f64>,
    direction: &'static str,
    undefined: Option<String>,
    stderr: Option<f64>,
}

pub fn score(c: &Common, reference: &Path, candidate: &Path) -> Result<(), CliError> {
    let ids = ids_or(c, IndexId::ALL)?;
    let a = read_partition(reference)?;
    let b = read_partition(candidate)?;
    same_n(&a, &b, candidate)?;
    let scores = evaluator(c, a.n()).scores(&ids, &a, &b).map_err(data)?;
    let rows: Vec<ScoreRow> = scores
        .iter()
        .map(|s| ScoreRow {
            index: s.index,
            value: s.value(),
            direction: direction(s.index),
            undefined: match s.score {
                Score::Undefined(u) => Some(u.to_string()),
                Score::Value(_) => None,
            },
            stderr: s.stderr,
        })
        .collect();
    let mut t = Table::new(["index", "value", "direction", "undefined", "stderr"]);
    for r in &rows {
        t.push([
            r.index.to_string(),
            num(r.value),
            r.direction.to_string(),
            r.undefined.clone().unwrap_or_default(),
            r.stderr.map(|x| x.to_string()).unwrap_or_default(),
        ]);
    }
    emit(c.format.unwrap_or(Format::Csv), c.out.as_deref(), &t, &rows, &[])
}

pub fn matrix(c: &Common, reference: &Path, candidates: &[PathBuf]) -> Result<(), CliError> {
    let ids = ids_or(c, IndexId::ALL)?;
    let a = read_partition(reference)?;
    let e = evaluator(c, a.n());
    let mut t = Table::new(std::iter::once("candidate".to_string()).chain(ids.iter().map(|i| i.to_string())));
    let mut json = Vec::new();
    for p in candidates {
        let b = read_partition(p)?;
        same_n(&a, &b, p)?;
        let values: Vec<Option<f64>> = e
            .scores(&ids, &a, &b)
            .map_err(data)?
            .iter()
            .map(|s| s.value())
            .collect();
        t.push(std::iter::once(p.display().to_string()).chain(values.iter().map(|v| num(*v))));
        json.push(serde_json::json!({
            "candidate": p.display().to_string(),
            "scores": ids.iter().zip(&values).map(|(i, v)| (i.to_string(), serde_json::json!(v))).collect::<serde_json::Map<_, _>>(),
        }));
    }
    emit(c.format.unwrap_or(Format::Csv), c.out.as_deref(), &t, &json, &[])
}

fn read_manifest(path: &Path) -> Result<Vec<[PathBuf; 3]>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [a, b1, b2] = parts[..] else {
            return Err(CliError::Data(format!(
                "{}:{}: expected three partition paths, found {}",
                path.display(),
                i + 1,
                parts.len()
            )));
        };
        out.push([a, b1, b2].map(|p| base.join(p)));
    }
    if out.is_empty() {
        return Err(CliError::Data(format!("{}: no triplets", path.display())));
    }
    Ok(out)
}

pub fn triplets(c: &Common, manifest: &Path, per_triplet: bool) -> Result<(), CliError> {
    let ids = ids_or(c, &INCONSISTENCY_SET)?;
    let mut records = Vec::new();
    for paths in read_manifest(manifest)? {
        let [a, b1, b2] = paths.each_ref().map(|p| read_partition(p));
        let (a, b1, b2) = (a?, b1?, b2?);
        same_n(&a, &b1, &paths[1])?;
        same_n(&a, &b2, &paths[2])?;
        let e = evaluator(c, a.n());
        records.push(analyze_triplet(&ids, &a, &b1, &b2, &e).map_err(data)?);
    }
    let m = inconsistency_matrix(&ids, &records);
    let format = c.format.unwrap_or(Format::Csv);
    if per_triplet {
        let mut t = Table::new(["triplet", "index_1", "index_2", "verdict"]);
        for (k, r) in records.iter().enumerate() {
            for (x, y, v) in &r.verdicts {
                t.push([(k + 1).to_string(), x.to_string(), y.to_string(), v.to_string()]);
            }
        }
        return emit(format, c.out.as_deref(), &t, &records, &[]);
    }
    let mut t = Table::new(
        std::iter::once("index".to_string())
            .chain(ids.iter().map(|i| i.to_string()))
            .chain(["ties".to_string()]),
    );
    for i in 0..ids.len() {
        let ties: usize = (0..ids.len()).filter(|&j| j != i).map(|j| m.ties[i][j]).sum();
        t.push(
            std::iter::once(ids[i].to_string())
                .chain((0..ids.len()).map(|j| if i == j { String::new() } else { num(m.percent(i, j)) }))
                .chain([ties.to_string()]),
        );
    }
    #[derive(Serialize)]
    struct Out<'a> {
        triplets: &'a [partition_similarity::analysis::TripletRecord],
        matrix: &'a partition_similarity::analysis::InconsistencyMatrix,
    }
    emit(
        format,
        c.out.as_deref(),
        &t,
        &Out {
            triplets: &records,
            matrix: &m,
        },
        &[],
    )
}

pub fn find_cover(c: &Common, max_size: usize, rounds: usize, batch: usize) -> Result<(), CliError> {
    let ids = ids_or(c, &INCONSISTENCY_SET)?;
    let n_max = c.n_max.unwrap_or(8);
    if n_max > partition_similarity::enumerate::ENUMERATION_GUARD {
        return Err(CliError::Usage(format!(
            "--n-max {n_max} exceeds the guard {}",
            partition_similarity::enumerate::ENUMERATION_GUARD
        )));
    }
    let budget = CoverBudget {
        n_min: 3.min(n_max),
        n_max,
        batch,
        max_rounds: rounds,
        max_size,
        seed: c.seed,
    };
    let result = find_inconsistency_cover(&ids, &budget, &Evaluator::exact())
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut t = Table::new(["triplet", "a", "b1", "b2", "pairs"]);
    for (k, tr) in result.triplets.iter().enumerate() {
        let pairs: Vec<String> = tr.pairs.iter().map(|(x, y)| format!("{x}/{y}")).collect();
        t.push([
            (k + 1).to_string(),
            tr.a.to_string(),
            tr.b1.to_string(),
            tr.b2.to_string(),
            pairs.join(" "),
        ]);
    }
    let fmt = |ps: &[(IndexId, IndexId)]| ps.iter().map(|(x, y)| format!("{x}/{y}")).collect::<Vec<_>>().join(" ");
    let mut notes = vec![format!(
        "cover size {} from {} sampled triplets",
        result.triplets.len(),
        result.examined
    )];
    if !result.unorderable.is_empty() {
        notes.push(format!("unorderable: {}", fmt(&result.unorderable)));
    }
    emit(c.format.unwrap_or(Format::Csv), c.out.as_deref(), &t, &result, &notes)?;
    for n in &notes {
        eprintln!("{n}");
    }
    if !result.complete {
        return Err(CliError::Budget(format!(
            "budget exhausted; uncovered pairs: {}",
            fmt(&result.uncovered)
        )));
    }
    Ok(())
}

pub fn properties(c: &Common, n_max_sampled: Option<usize>, guide: bool) -> Result<(), CliError> {
    let ids = ids_or(c, IndexId::ALL)?;
    let mut budget = Budget::with_n_max(c.n_max.unwrap_or(Budget::default().n_max));
    if let Some(n) = n_max_sampled {
        budget.n_max_sampled = n;
    }
    let cells = property_matrix(&ids, &budget);
    let columns = Property::columns(partition_similarity::indices::Family::PairCounting);
    let format = c.format.unwrap_or(Format::Text);
    if guide {
        let mut t = Table::new(["property", "indices"]);
        for &p in columns {
            let holding: Vec<String> = cells
                .iter()
                .filter(|v| v.property == p && v.holds() == Some(true))
                .map(|v| v.index.to_string())
                .collect();
            t.push([p.as_str().to_string(), holding.join(" ")]);
        }
        let mut notes = Vec::new();
        for &id in &ids {
            let held = cells
                .iter()
                .filter(|v| v.index == id && v.holds() == Some(true))
                .count();
            let checked = cells
                .iter()
                .filter(|v| v.index == id && v.holds().is_some())
                .count();
            notes.push(format!("{id}: {held}/{checked} properties"));
        }
        return emit(format, c.out.as_deref(), &t, &cells, &notes);
    }
    let mut t = Table::new(
        std::iter::once("index".to_string()).chain(columns.iter().map(|p| p.short().to_string())),
    );
    let mut appendix = Vec::new();
    for &id in &ids {
        let row: Vec<String> = columns
            .iter()
            .map(|&p| {
                cells
                    .iter()
                    .find(|v| v.index == id && v.property == p)
                    .map(|v| v.cell())
                    .unwrap_or_else(|| "-".into())
            })
            .collect();
        t.push(std::iter::once(id.to_string()).chain(row));
    }
    for v in &cells {
        match (&v.verdict, &v.witness) {
            (Verdict::Violated, Some(w)) => {
                appendix.push(format!("{} {} [{}]: {w}", v.index, v.property, v.search_bound))
            }
            (Verdict::Error { message }, _) => {
                appendix.push(format!("{} {}: error: {message}", v.index, v.property))
            }
            _ => {}
        }
    }
    emit(format, c.out.as_deref(), &t, &cells, &appendix)
}

pub fn baseline_tests(c: &Common, n_values: &[usize], r: usize) -> Result<(), CliError> {
    let default: Vec<IndexId> = GENERAL_TABLE.iter().chain(&PAIR_TABLE).copied().collect();
    let ids = ids_or(c, &default)?;
    let cfg = SuiteConfig {
        n_values: n_values.to_vec(),
        r,
        seed: c.seed,
        mi_samples: c.samples.unwrap_or(partition_similarity::analysis::baseline::DEFAULT_MI_SAMPLES),
    };
    let rows = baseline_suite(&ids, &cfg).map_err(data)?;
    let mut t = Table::new(["test", "index", "n", "specs", "r", "seed", "statistic", "p", "decision"]);
    let decision = |rej: bool| if rej { "reject" } else { "accept" };
    for row in &rows {
        for rep in row.anova.iter().chain(&row.selection) {
            let specs: Vec<String> = rep.specs.iter().map(|s| format!("BS({},{})", s.n(), s.k())).collect();
            t.push([
                rep.test.as_str().to_string(),
                rep.index.to_string(),
                rep.n.to_string(),
                specs.join(" "),
                rep.r.to_string(),
                rep.seed.to_string(),
                rep.statistic.to_string(),
                rep.p_value.to_string(),
                decision(rep.reject).to_string(),
            ]);
        }
        for (name, comb) in [
            ("fisher-anova", &row.anova_combined),
            ("fisher-selection", &row.selection_combined),
        ] {
            t.push([
                name.to_string(),
                row.index.to_string(),
                n_values.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" "),
                String::new(),
                r.to_string(),
                c.seed.to_string(),
                comb.statistic.to_string(),
                comb.p_value.to_string(),
                decision(comb.reject).to_string(),
            ]);
        }
    }
    let warnings: Vec<String> = rows
        .iter()
        .flat_map(|r| r.anova.iter().chain(&r.selection))
        .flat_map(|rep| rep.warnings.iter().map(move |w| format!("{} n={}: {w}", rep.index, rep.n)))
        .collect();
    for w in warnings.iter().take(5) {
        eprintln!("warning: {w}");
    }
    emit(c.format.unwrap_or(Format::Csv), c.out.as_deref(), &t, &rows, &[])
}

fn experiment_ids(c: &Common) -> Result<Vec<IndexId>, CliError> {
    let default: Vec<IndexId> = PAIR_TABLE
        .iter()
        .chain(&[
            IndexId::Nmi,
            IndexId::NmiMax,
            IndexId::Fnmi,
            IndexId::Vi,
            IndexId::FMeasure,
            IndexId::BCubed,
        ])
        .copied()
        .collect();
    ids_or(c, &default)
}

fn reference(p: Option<&Path>) -> Result<Partition, CliError> {
    match p {
        Some(p) => read_partition(p),
        None => Ok(reference_fixture()),
    }
}

fn emit_curve(c: &Common, curve: &ExperimentCurve) -> Result<(), CliError> {
    let mut t = Table::new([curve.sweep.as_str(), "index", "mean", "q05", "q95", "stderr", "samples", "defined", "seed"]);
    for p in &curve.points {
        t.push([
            p.x.to_string(),
            p.index.to_string(),
            p.mean.to_string(),
            p.q05.to_string(),
            p.q95.to_string(),
            p.stderr.to_string(),
            curve.samples.to_string(),
            p.defined.to_string(),
            curve.seed.to_string(),
        ]);
    }
    emit(c.format.unwrap_or(Format::Csv), c.out.as_deref(), &t, curve, &[])
}

pub fn k_scan(c: &Common, reference_path: Option<&Path>, k_values: Option<Vec<usize>>) -> Result<(), CliError> {
    let ids = experiment_ids(c)?;
    let a = reference(reference_path)?;
    let ks = k_values.unwrap_or_else(default_k_values);
    if let Some(&k) = ks.iter().find(|&&k| k == 0 || k > a.n()) {
        return Err(CliError::Usage(format!("k = {k} outside 1..={}", a.n())));
    }
    let curve = run_k_scan(&a, &ks, c.samples.unwrap_or(200), &ids, c.seed, &evaluator(c, a.n()))
        .map_err(data)?;
    emit_curve(c, &curve)
}

pub fn s_scan(c: &Common, reference_path: Option<&Path>, s_values: Option<Vec<usize>>) -> Result<(), CliError> {
    let ids = experiment_ids(c)?;
    let a = reference(reference_path)?;
    let ss = s_values.unwrap_or_else(default_s_values);
    if let Some(&s) = ss.iter().find(|&&s| s == 0 || 31 * s >= a.n()) {
        return Err(CliError::Usage(format!("s = {s} infeasible: need 0 < 31 s < {}", a.n())));
    }
    let curve = run_s_scan(&a, &ss, c.samples.unwrap_or(200), &ids, c.seed, &evaluator(c, a.n()))
        .map_err(data)?;
    emit_curve(c, &curve)
}

pub fn indices_list(c: &Common) -> Result<(), CliError> {
    let ids = ids_or(c, IndexId::ALL)?;
    let mut t = Table::new(["id", "name", "family", "direction", "c_max", "c_min", "c_base", "equivalent_to"]);
    let rows: Vec<_> = ids.iter().map(|i| i.descriptor()).collect();
    for d in &rows {
        t.push([
            d.id.to_string(),
            d.name.to_string(),
            d.family.to_string(),
            direction(d.id).to_string(),
            num(d.c_max),
            num(d.c_min),
            num(d.c_base),
            d.equivalence_rep.to_string(),
        ]);
    }
    emit(c.format.unwrap_or(Format::Text), c.out.as_deref(), &t, &rows, &[])
}
