use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use depmark::exact::MeasureReport;
use depmark::ExampleId;

fn depmark(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_depmark"))
        .args(args)
        .env_remove("DEPMARK_THREADS")
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn identical_arguments_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let runs = ["a", "b"].map(|tag| {
        let base = dir.path().join(tag);
        let sample = base.join("sample.csv");
        let markov = base.join("markov.csv");
        let est = base.join("estimate.json");
        let figs = base.join("figs");
        assert!(depmark(&[
            "sample",
            "--example",
            "ex2_5",
            "--n",
            "3000",
            "--seed",
            "9",
            "--out",
            path(&sample)
        ])
        .status
        .success());
        assert!(depmark(&[
            "markov",
            "--example",
            "ex3_5",
            "--n",
            "3000",
            "--transform",
            "--out",
            path(&markov)
        ])
        .status
        .success());
        assert!(depmark(&[
            "estimate",
            "--in",
            path(&sample),
            "--seed",
            "4",
            "--out",
            path(&est)
        ])
        .status
        .success());
        assert!(depmark(&["figure", "3", "--out", path(&figs)])
            .status
            .success());
        base
    });
    for file in [
        "sample.csv",
        "markov.csv",
        "estimate.json",
        "figs/fig3_markov_squared.csv",
    ] {
        let a = fs::read(runs[0].join(file)).unwrap();
        let b = fs::read(runs[1].join(file)).unwrap();
        assert!(!a.is_empty() && a == b, "{file}");
    }
}

#[test]
fn model_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for id in ExampleId::ALL {
        let file = dir.path().join(format!("{id}.json"));
        assert!(
            depmark(&["example", "show", id.as_str(), "--out", path(&file)])
                .status
                .success()
        );
        let from_file = depmark(&["exact", "--model", path(&file)]);
        let built_in = depmark(&["exact", "--example", id.as_str()]);
        assert!(
            from_file.status.success(),
            "{}",
            String::from_utf8_lossy(&from_file.stderr)
        );
        let a: Vec<MeasureReport> = serde_json::from_slice(&from_file.stdout).unwrap();
        let b: Vec<MeasureReport> = serde_json::from_slice(&built_in.stdout).unwrap();
        for (r, s) in a.iter().zip(&b) {
            for (u, v) in [(r.xi, s.xi), (r.r2, s.r2), (r.lambda, s.lambda)] {
                match (u, v) {
                    (Some(u), Some(v)) => assert!((u - v).abs() <= 1e-12, "{id}"),
                    (u, v) => assert_eq!(u.is_some(), v.is_some(), "{id}"),
                }
            }
        }
    }
}

#[test]
fn figure_csvs_have_documented_headers() {
    let dir = tempfile::tempdir().unwrap();
    let expected: [&[(&str, &str)]; 7] = [
        &[("xy", "x1,y"), ("markov", "x1,y,yprime")],
        &[("xy", "x1,y"), ("markov", "x1,y,yprime")],
        &[
            ("xy", "x1,y"),
            ("markov", "x1,y,yprime"),
            ("xy_squared", "x1,y"),
            ("markov_squared", "x1,y,yprime"),
        ],
        &[("sample", "u,v"), ("cuts", "representation,block,a,b,mass")],
        &[
            ("xy", "x1,y"),
            ("markov", "x1,y,yprime"),
            ("xy_transformed", "x1,y"),
            ("markov_transformed", "x1,y,yprime"),
        ],
        &[
            ("xy", "x1,y"),
            ("markov", "x1,y,yprime"),
            ("xy_transformed", "x1,y"),
            ("markov_transformed", "x1,y,yprime"),
        ],
        &[
            ("xy", "x1,y"),
            ("markov", "x1,y,yprime"),
            ("xy_transformed", "x1,y"),
            ("markov_transformed", "x1,y,yprime"),
        ],
    ];
    for (k, panels) in expected.iter().enumerate() {
        let id = k + 1;
        let out = depmark(&["figure", &id.to_string(), "--out", path(dir.path())]);
        assert!(out.status.success());
        for (panel, header) in panels.iter() {
            let text = fs::read_to_string(dir.path().join(format!("fig{id}_{panel}.csv"))).unwrap();
            let mut rdr = csv::Reader::from_reader(text.as_bytes());
            assert_eq!(
                rdr.headers().unwrap().iter().collect::<Vec<_>>().join(","),
                *header
            );
            let width = header.split(',').count();
            let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
            assert!(rows
                .iter()
                .all(|r| r.len() == width && r.iter().all(|v| v.parse::<f64>().is_ok())));
            let expected_rows = match (id, *panel) {
                (4, "cuts") => 7,
                (4, _) => 2000,
                _ => 1000,
            };
            assert_eq!(rows.len(), expected_rows, "fig{id}_{panel}");
        }
    }
}

#[test]
fn figure_seven_blocks_have_dyadic_widths() {
    let dir = tempfile::tempdir().unwrap();
    assert!(depmark(&["figure", "7", "--out", path(dir.path())])
        .status
        .success());
    let d = depmark::MarkovDataset::load(&dir.path().join("fig7_markov_transformed.csv")).unwrap();
    for (&u, &v) in d.y().iter().zip(d.y_prime()) {
        // both coordinates in the same block (1 - 2^(1-k), 1 - 2^-k]
        let block = |t: f64| (-(1.0 - t).log2()).ceil();
        assert_eq!(block(u), block(v), "({u}, {v})");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        depmark(&["exact", "--example", "ex9_9"]).status.code(),
        Some(2)
    );
    assert_eq!(depmark(&["figure", "8"]).status.code(), Some(2));
    let missing = dir.path().join("missing.csv");
    assert_eq!(
        depmark(&["estimate", "--in", path(&missing)]).status.code(),
        Some(4)
    );
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "a,b\n1,2\n").unwrap();
    assert_eq!(
        depmark(&["estimate", "--in", path(&bad)]).status.code(),
        Some(2)
    );
    let bad_model = dir.path().join("bad.json");
    fs::write(&bad_model, "{\"p\": 1}").unwrap();
    assert_eq!(
        depmark(&["exact", "--model", path(&bad_model)])
            .status
            .code(),
        Some(2)
    );
    let threads = Command::new(env!("CARGO_BIN_EXE_depmark"))
        .args(["example", "list"])
        .env("DEPMARK_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(2));
}

#[test]
fn reproduce_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let small = dir.path().join("small");
    let out = depmark(&["reproduce", "--n", "40", "--out", path(&small)]);
    assert_eq!(out.status.code(), Some(3));
    let checks = fs::read_to_string(small.join("checks.csv")).unwrap();
    assert!(checks.lines().skip(1).any(|l| l.ends_with(",false")));
    for f in ["summary.md", "measures.csv", "characterization.csv"] {
        assert!(small.join(f).exists(), "{f}");
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let sample = dir.path().join("s.csv");
    assert!(depmark(&[
        "sample",
        "--example",
        "ex2_6",
        "--n",
        "20000",
        "--out",
        path(&sample)
    ])
    .status
    .success());
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_depmark"))
            .args(["estimate", "--in", path(&sample)])
            .env("DEPMARK_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn check_reports_statistics_and_thresholds() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.csv");
    assert!(depmark(&[
        "markov",
        "--example",
        "ex3_3",
        "--n",
        "4000",
        "--transform",
        "--out",
        path(&m)
    ])
    .status
    .success());
    let out = depmark(&["check", "--in", path(&m)]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["mode"], "empirical");
    for flag in [
        "independent",
        "uncorrelated",
        "concordance_balanced",
        "comonotone",
        "completely_separated",
    ] {
        assert!(
            v[flag]["statistic"].is_number() && v[flag]["threshold"].is_number(),
            "{flag}"
        );
    }
    assert_eq!(v["completely_separated"]["flag"], true);
    let exact = depmark(&["check", "--example", "ex3_4", "--format", "csv"]);
    let text = String::from_utf8(exact.stdout).unwrap();
    assert!(text.starts_with("property,flag,statistic,threshold,measure_flag,measure_value"));
    assert!(text.lines().any(|l| l.starts_with("comonotone,true")));
}
