use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn psim(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psim"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, labels: &[u32]) -> PathBuf {
    let p = dir.join(name);
    let text: String = labels.iter().map(|l| format!("{l}\n")).collect();
    std::fs::write(&p, text).unwrap();
    p
}

/// A = {{0,1},{2},{3}}, B = {{0,1},{2,3}}, C = {{0},{1},{2,3}}.
fn abc(dir: &Path) {
    write(dir, "a.txt", &[0, 0, 1, 2]);
    write(dir, "b.txt", &[0, 0, 1, 1]);
    write(dir, "c.txt", &[0, 1, 2, 2]);
}

fn value(csv_out: &str, index: &str) -> f64 {
    csv_out
        .lines()
        .find(|l| l.starts_with(&format!("{index},")))
        .and_then(|l| l.split(',').nth(1))
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn score_examples() {
    let d = TempDir::new().unwrap();
    abc(d.path());
    let o = psim(&["score", "a.txt", "b.txt", "--indices", "rand"], d.path());
    assert!(o.status.success());
    assert!((value(&stdout(&o), "rand") - 5.0 / 6.0).abs() < 1e-12);

    let o = psim(&["score", "a.txt", "a.txt", "--indices", "vi"], d.path());
    assert_eq!(value(&stdout(&o), "vi"), 0.0);

    // N11 = 0: no pair is together in both
    write(d.path(), "x.txt", &[0, 0, 1, 1]);
    write(d.path(), "y.txt", &[0, 1, 0, 1]);
    let o = psim(&["score", "x.txt", "y.txt", "--indices", "jaccard"], d.path());
    assert_eq!(value(&stdout(&o), "jaccard"), 0.0);
}

#[test]
fn score_reports_direction_and_undefined() {
    let d = TempDir::new().unwrap();
    abc(d.path());
    write(d.path(), "one.txt", &[0, 0, 0, 0]);
    let o = psim(
        &["score", "a.txt", "one.txt", "--indices", "correlation_coefficient,vi"],
        d.path(),
    );
    let out = stdout(&o);
    assert!(out.contains("correlation_coefficient,NA,higher,trivial partition"), "{out}");
    assert!(out.contains("vi,") && out.contains(",lower,"));
}

#[test]
fn exit_codes() {
    let d = TempDir::new().unwrap();
    abc(d.path());
    write(d.path(), "short.txt", &[0, 1]);
    let usage = psim(&["score", "a.txt", "b.txt", "--indices", "nope"], d.path());
    assert_eq!(usage.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&usage.stderr).contains("available: rand"));
    assert_eq!(psim(&["frobnicate"], d.path()).status.code(), Some(1));
    assert_eq!(psim(&["score", "a.txt", "short.txt"], d.path()).status.code(), Some(2));
    assert_eq!(psim(&["score", "a.txt", "missing.txt"], d.path()).status.code(), Some(2));
    std::fs::write(d.path().join("bad.txt"), "0\n\nx,\n").unwrap();
    assert_eq!(psim(&["score", "a.txt", "bad.txt"], d.path()).status.code(), Some(2));
    assert_eq!(psim(&["--help"], d.path()).status.code(), Some(0));
}

#[test]
fn triplet_consistency_ar_cc() {
    let d = TempDir::new().unwrap();
    abc(d.path());
    std::fs::write(d.path().join("m.txt"), "# reference first\na.txt b.txt c.txt\n").unwrap();
    let o = psim(
        &["triplets", "m.txt", "--indices", "adjusted_rand,correlation_coefficient", "--per-triplet"],
        d.path(),
    );
    assert!(o.status.success());
    assert!(stdout(&o).contains("1,adjusted_rand,correlation_coefficient,consistent"));
}

#[test]
fn identical_candidates_are_ties() {
    let d = TempDir::new().unwrap();
    abc(d.path());
    std::fs::write(d.path().join("m.txt"), "a.txt b.txt b.txt\n").unwrap();
    let o = psim(&["triplets", "m.txt", "--per-triplet"], d.path());
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 13 * 12 / 2);
    assert!(rows.iter().all(|r| r.ends_with(",tie")));
    // aggregated: every percentage is undefined
    let o = psim(&["triplets", "m.txt"], d.path());
    assert!(stdout(&o).lines().skip(1).all(|l| !l.contains('.')));
}

#[test]
fn inconsistency_matrix_is_symmetric() {
    let d = TempDir::new().unwrap();
    abc(d.path());
    write(d.path(), "e.txt", &[0, 1, 1, 1]);
    write(d.path(), "f.txt", &[0, 1, 2, 3]);
    std::fs::write(
        d.path().join("m.txt"),
        "a.txt b.txt c.txt\na.txt c.txt e.txt\nb.txt e.txt f.txt\nc.txt a.txt f.txt\n",
    )
    .unwrap();
    let o = psim(&["triplets", "m.txt"], d.path());
    assert!(o.status.success());
    let out = stdout(&o);
    let cells: Vec<Vec<String>> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').skip(1).map(String::from).collect())
        .collect();
    let k = cells.len();
    for i in 0..k {
        for j in 0..k {
            assert_eq!(cells[i][j], cells[j][i], "({i},{j})");
        }
    }
}

#[test]
fn malformed_manifest() {
    let d = TempDir::new().unwrap();
    abc(d.path());
    std::fs::write(d.path().join("m.txt"), "a.txt b.txt\n").unwrap();
    assert_eq!(psim(&["triplets", "m.txt"], d.path()).status.code(), Some(2));
}

#[test]
fn cover_reports_unorderable_and_budget() {
    let d = TempDir::new().unwrap();
    let o = psim(&["find-cover", "--indices", "rand,hubert", "--batch", "10", "--rounds", "1"], d.path());
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("unorderable: rand/hubert"));

    let o = psim(&["find-cover", "--batch", "1", "--rounds", "1"], d.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("uncovered pairs"));
}

#[test]
fn cover_for_nmi_pair_is_one_triplet() {
    let d = TempDir::new().unwrap();
    let o = psim(&["find-cover", "--indices", "nmi,nmi_max", "--batch", "2000"], d.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn k_scan_on_small_reference() {
    let d = TempDir::new().unwrap();
    let labels: Vec<u32> = (0..40).map(|i| i % 5).collect();
    write(d.path(), "r.txt", &labels);
    let args = [
        "experiment", "k-scan", "--reference", "r.txt", "--k-values", "2,40", "--samples", "30",
        "--indices", "adjusted_rand,rand",
    ];
    let o = psim(&args, d.path());
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("k,index,mean,q05,q95,stderr,samples,defined,seed"));
    let singletons = out.lines().find(|l| l.starts_with("40,rand,")).unwrap();
    let f: Vec<&str> = singletons.split(',').collect();
    assert_eq!(f[3], f[4], "k = n has a zero-width band");
    // deterministic in the seed
    assert_eq!(stdout(&psim(&args, d.path())), out);

    let bad = psim(&["experiment", "k-scan", "--reference", "r.txt", "--k-values", "41"], d.path());
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn s_scan_feasibility() {
    let d = TempDir::new().unwrap();
    let labels: Vec<u32> = (0..40).map(|i| i % 5).collect();
    write(d.path(), "r.txt", &labels);
    let o = psim(
        &["experiment", "s-scan", "--reference", "r.txt", "--s-values", "1", "--samples", "10", "--indices", "rand"],
        d.path(),
    );
    assert!(o.status.success());
    assert!(stdout(&o).contains("\n1,rand,"));
    let o = psim(&["experiment", "s-scan", "--reference", "r.txt", "--s-values", "2"], d.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn properties_row_for_cd() {
    let d = TempDir::new().unwrap();
    let o = psim(
        &["properties", "--indices", "correlation_distance", "--n-max", "5", "--format", "csv"],
        d.path(),
    );
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().next().unwrap(), "index,max,min,sym,dist,lin,mono,strong,cb,acb,bias");
    assert_eq!(out.lines().nth(1).unwrap(), "correlation_distance,✓,✓,✓,✓,✓,✓,✓,✗,✓,none");
}

#[test]
fn baseline_tests_csv_and_out_file() {
    let d = TempDir::new().unwrap();
    let o = psim(
        &["baseline-tests", "--indices", "rand", "--n-values", "30,40", "--r", "30", "--out", "t.csv"],
        d.path(),
    );
    assert!(o.status.success());
    let out = std::fs::read_to_string(d.path().join("t.csv")).unwrap();
    assert!(out.starts_with("test,index,n,specs,r,seed,statistic,p,decision"));
    assert!(out.contains("fisher-anova,rand,30 40,,30,0,"));
    assert_eq!(out.lines().count(), 1 + 4 + 2);
}

#[test]
fn json_output_parses() {
    let d = TempDir::new().unwrap();
    abc(d.path());
    let o = psim(&["matrix", "a.txt", "b.txt", "c.txt", "--indices", "rand", "--format", "json"], d.path());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert!((v[0]["scores"]["rand"].as_f64().unwrap() - 5.0 / 6.0).abs() < 1e-12);
}
