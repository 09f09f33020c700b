//! Recomputes every catalog example and checks it against reference values.
//!
//! For each example: both exact paths, the estimators on one sample and the
//! exact characterization. The run writes `summary.md`, `measures.csv`,
//! `characterization.csv` and `checks.csv`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use depmark::characterize::{classify, CharacterizationReport};
use depmark::estimate::{estimate_all, Estimates, MeasureSelection};
use depmark::exact::{exact_report, MeasurePath, MeasureReport};
use depmark::{example_model, ExampleId};
use serde::Serialize;

use crate::commands::{csv_text, opt};
use crate::CliResult;

/// One value compared against a reference.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub example: String,
    pub quantity: String,
    pub value: Option<f64>,
    pub reference: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.value
            .is_some_and(|v| (v - self.reference).abs() <= self.tolerance)
    }
}

#[derive(Clone, Debug)]
pub struct ExampleResult {
    pub id: ExampleId,
    pub definition: MeasureReport,
    pub markov: MeasureReport,
    pub estimates: Estimates,
    pub report: CharacterizationReport,
}

#[derive(Clone, Debug)]
pub struct Reproduction {
    pub results: Vec<ExampleResult>,
    pub checks: Vec<Check>,
    pub markdown: String,
}

impl Reproduction {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed()).count()
    }
}

/// Gap tolerances between the two exact paths.
const XI_GAP: f64 = 1e-8;
const R2_GAP: f64 = 1e-8;
const LAMBDA_GAP: f64 = 1e-6;

/// Reference values: (example, quantity, value, exact tolerance, estimator tolerance).
const REFERENCES: &[(ExampleId, &str, f64, f64, Option<f64>)] = &[
    (ExampleId::Ex2_4, "xi", 6.0 / 49.0, 1e-8, Some(0.02)),
    (ExampleId::Ex2_4, "r2", 0.0, 1e-10, Some(0.01)),
    (ExampleId::Ex2_4, "lambda", 0.0, 1e-10, Some(0.01)),
    (ExampleId::Ex2_5, "lambda", 1.0 / 9.0, 1e-6, Some(0.02)),
    (ExampleId::Ex2_6Sq, "r2", 1.0 / 16.0, 1e-3, Some(0.01)),
    (ExampleId::Ex3_3, "lambda", 1.0, 1e-8, None),
    (ExampleId::Ex3_4, "xi", 1.0, 1e-10, None),
    (ExampleId::Ex3_4, "r2", 1.0, 1e-10, None),
    (ExampleId::Ex3_4, "lambda", 4.0 / 9.0, 1e-6, Some(0.02)),
    (ExampleId::Ex3_5, "lambda", 1.0, 1e-8, None),
];

/// Expected ordinal-sum sizes of the completely separated examples.
const BLOCK_COUNTS: &[(ExampleId, usize)] = &[
    (ExampleId::Ex3_3, 2),
    (ExampleId::Ex3_5, depmark::catalog::EX3_5_ATOMS),
];

fn measure(r: &MeasureReport, name: &str) -> Option<f64> {
    match name {
        "xi" => r.xi,
        "r2" => r.r2,
        _ => r.lambda,
    }
}

fn estimate(e: &Estimates, name: &str) -> Option<f64> {
    match name {
        "xi" => e.xi,
        "r2" => e.r2,
        _ => e.lambda,
    }
}

fn compute(id: ExampleId, n: usize, seed: u64) -> CliResult<ExampleResult> {
    let model = example_model(id);
    let definition = exact_report(&model, MeasurePath::Definition)?;
    let markov = exact_report(&model, MeasurePath::Markov)?;
    let data = model.sample_joint(n, seed)?;
    let estimates = estimate_all(&data, seed, MeasureSelection::default())?;
    let report = classify(&model)?;
    Ok(ExampleResult {
        id,
        definition,
        markov,
        estimates,
        report,
    })
}

fn checks_for(r: &ExampleResult) -> Vec<Check> {
    let name = r.id.as_str();
    let check = |quantity: String, value: Option<f64>, reference: f64, tolerance: f64| Check {
        example: name.to_string(),
        quantity,
        value,
        reference,
        tolerance,
    };
    let mut out = Vec::new();
    for (m, tol) in [("xi", XI_GAP), ("r2", R2_GAP), ("lambda", LAMBDA_GAP)] {
        let gap = match (measure(&r.definition, m), measure(&r.markov, m)) {
            (Some(a), Some(b)) => Some((a - b).abs()),
            (None, None) => Some(0.0),
            _ => None,
        };
        out.push(check(format!("{m} path gap"), gap, 0.0, tol));
    }
    let disagreements = [
        &r.report.independent,
        &r.report.uncorrelated,
        &r.report.concordance_balanced,
        &r.report.comonotone,
        &r.report.completely_separated.decision,
    ]
    .iter()
    .filter(|d| d.measure_flag.is_some_and(|f| f != d.flag))
    .count();
    out.push(check(
        "route disagreements".into(),
        Some(disagreements as f64),
        0.0,
        0.0,
    ));
    for &(id, m, reference, exact_tol, est_tol) in REFERENCES.iter().filter(|c| c.0 == r.id) {
        out.push(check(
            format!("{m} definition"),
            measure(&r.definition, m),
            reference,
            exact_tol,
        ));
        out.push(check(
            format!("{m} markov"),
            measure(&r.markov, m),
            reference,
            exact_tol,
        ));
        if let Some(tol) = est_tol {
            out.push(check(
                format!("{m} estimator"),
                estimate(&r.estimates, m),
                reference,
                tol,
            ));
        }
        debug_assert_eq!(id, r.id);
    }
    for &(_, size) in BLOCK_COUNTS.iter().filter(|c| c.0 == r.id) {
        let s = &r.report.completely_separated;
        let found = if s.decision.flag {
            s.structure.size() as f64
        } else {
            0.0
        };
        out.push(check(
            "ordinal sum size".into(),
            Some(found),
            size as f64,
            0.0,
        ));
    }
    out
}

fn short(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |v| format!("{v:.6}"))
}

fn markdown(results: &[ExampleResult], checks: &[Check], n: usize, seed: u64) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# Reproduction summary\n\nEstimators use n = {n} and seed {seed}.\n"
    );
    let _ = writeln!(
        s,
        "## Measures\n\n| example | path | xi | r2 | lambda |\n|---|---|---|---|---|"
    );
    for r in results {
        let e = &r.estimates;
        for (path, xi, r2, lambda) in [
            (
                "definition",
                r.definition.xi,
                r.definition.r2,
                r.definition.lambda,
            ),
            ("markov", r.markov.xi, r.markov.r2, r.markov.lambda),
            ("estimator", e.xi, e.r2, e.lambda),
        ] {
            let _ = writeln!(
                s,
                "| {} | {path} | {} | {} | {} |",
                r.id,
                short(xi),
                short(r2),
                short(lambda)
            );
        }
    }
    let _ = writeln!(
        s,
        "\n## Characterization\n\n| example | independent | uncorrelated | concordance balanced | comonotone | completely separated | ordinal sum size |\n|---|---|---|---|---|---|---|"
    );
    for r in results {
        let [a, b, c, d, e] = r.report.flags();
        let size = r.report.completely_separated.structure.size();
        let _ = writeln!(s, "| {} | {a} | {b} | {c} | {d} | {e} | {size} |", r.id);
    }
    let _ = writeln!(
        s,
        "\n## Checks\n\n| example | quantity | value | reference | tolerance | status |\n|---|---|---|---|---|---|"
    );
    for c in checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        let value = c.value.map_or_else(|| "-".into(), |v| format!("{v:.3e}"));
        let _ = writeln!(
            s,
            "| {} | {} | {value} | {:.6} | {:e} | {status} |",
            c.example, c.quantity, c.reference, c.tolerance
        );
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    let _ = writeln!(
        s,
        "\n{} of {} checks passed.",
        checks.len() - failed,
        checks.len()
    );
    s
}

fn measures_csv(results: &[ExampleResult]) -> CliResult<String> {
    let mut rows = Vec::new();
    for r in results {
        let e = &r.estimates;
        for (path, xi, r2, lambda) in [
            (
                "definition",
                r.definition.xi,
                r.definition.r2,
                r.definition.lambda,
            ),
            ("markov", r.markov.xi, r.markov.r2, r.markov.lambda),
            ("estimator", e.xi, e.r2, e.lambda),
        ] {
            rows.push(vec![
                r.id.to_string(),
                path.to_string(),
                opt(xi),
                opt(r2),
                opt(lambda),
            ]);
        }
    }
    csv_text(&["example", "path", "xi", "r2", "lambda"], &rows)
}

fn characterization_csv(results: &[ExampleResult]) -> CliResult<String> {
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|r| {
            let mut row = vec![r.id.to_string()];
            row.extend(r.report.flags().iter().map(|f| f.to_string()));
            row.push(r.report.completely_separated.structure.size().to_string());
            row
        })
        .collect();
    csv_text(
        &[
            "example",
            "independent",
            "uncorrelated",
            "concordance_balanced",
            "comonotone",
            "completely_separated",
            "ordinal_sum_size",
        ],
        &rows,
    )
}

fn checks_csv(checks: &[Check]) -> CliResult<String> {
    let rows: Vec<Vec<String>> = checks
        .iter()
        .map(|c| {
            vec![
                c.example.clone(),
                c.quantity.clone(),
                opt(c.value),
                c.reference.to_string(),
                c.tolerance.to_string(),
                c.passed().to_string(),
            ]
        })
        .collect();
    csv_text(
        &[
            "example",
            "quantity",
            "value",
            "reference",
            "tolerance",
            "passed",
        ],
        &rows,
    )
}

/// Runs every example, writes the summary files into `out_dir` and returns
/// the results. Failed checks are reported, not raised.
pub fn run_reproduction(out_dir: &Path, n: usize, seed: u64) -> CliResult<Reproduction> {
    let results = ExampleId::ALL
        .iter()
        .map(|&id| compute(id, n, seed))
        .collect::<CliResult<Vec<_>>>()?;
    let checks: Vec<Check> = results.iter().flat_map(checks_for).collect();
    let md = markdown(&results, &checks, n, seed);
    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join("summary.md"), &md)?;
    fs::write(out_dir.join("measures.csv"), measures_csv(&results)?)?;
    fs::write(
        out_dir.join("characterization.csv"),
        characterization_csv(&results)?,
    )?;
    fs::write(out_dir.join("checks.csv"), checks_csv(&checks)?)?;
    Ok(Reproduction {
        results,
        checks,
        markdown: md,
    })
}
