use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use depmark::characterize::{classify, classify_sample, CharacterizationReport, Decision};
use depmark::estimate::{estimate_all, MeasureSelection};
use depmark::exact::{exact_report, MeasurePath, MeasureReport};
use depmark::markov::{sample_markov, transform_markov};
use depmark::model_file::{load_model, model_to_json};
use depmark::{example_model, Dataset, DistributionModel, ExampleId, MarkovDataset};
use serde::Serialize;

use crate::args::{
    CheckArgs, Cli, Command, EstimateArgs, ExactArgs, ExampleAction, Format, Measure, ModelSource,
    PathChoice,
};
use crate::figures::{default_size, emit_figure_data};
use crate::reproduce::run_reproduction;
use crate::{CliError, CliResult};

/// Runs one parsed command line.
pub fn run(cli: Cli) -> CliResult<()> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Example { action } => emit(out, &example(action, cli.format)?),
        Command::Sample(a) => {
            let data = load_source(&a.source)?.sample_joint(a.n, cli.seed)?;
            emit(out, &dataset_text(&data, cli.format)?)
        }
        Command::Markov(a) => {
            let model = load_source(&a.source)?;
            let mut data = sample_markov(&model, a.n, cli.seed)?;
            if a.transform {
                data = transform_markov(&model, &data)?;
            }
            emit(out, &markov_text(&data, cli.format)?)
        }
        Command::Exact(a) => emit(out, &exact(&a, cli.format)?),
        Command::Estimate(a) => emit(out, &estimate(&a, cli.seed, cli.format)?),
        Command::Check(a) => emit(out, &check(&a, cli.format)?),
        Command::Figure(a) => {
            let dir = out.map_or_else(
                || PathBuf::from(format!("figure{}", a.id)),
                Path::to_path_buf,
            );
            let files = emit_figure_data(
                a.id,
                a.n.unwrap_or_else(|| default_size(a.id)),
                cli.seed,
                &dir,
            )?;
            let listing: String = files.iter().map(|f| format!("{}\n", f.display())).collect();
            emit(None, &listing)
        }
        Command::Reproduce(a) => {
            let dir = out.map_or_else(|| PathBuf::from("reproduction"), Path::to_path_buf);
            let rep = run_reproduction(&dir, a.n, cli.seed)?;
            emit(None, &rep.markdown)?;
            match rep.failures() {
                0 => Ok(()),
                k => Err(CliError::Acceptance(k)),
            }
        }
    }
}

/// Writes `text` to the file `out`, or to stdout.
fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(path, text)?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn load_source(source: &ModelSource) -> CliResult<DistributionModel> {
    match (&source.example, &source.model) {
        (Some(id), _) => Ok(example_model(*id)),
        (None, Some(path)) => Ok(load_model(path)?),
        (None, None) => Err(CliError::Usage("give --example or --model".into())),
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(depmark::Error::from)?;
    s.push('\n');
    Ok(s)
}

/// Renders rows as CSV with proper quoting.
pub(crate) fn csv_text(header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(depmark::Error::from)?;
    for r in rows {
        w.write_record(r).map_err(depmark::Error::from)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub(crate) fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

#[derive(Serialize)]
struct ExampleEntry {
    id: &'static str,
    description: &'static str,
}

fn example(action: ExampleAction, format: Option<Format>) -> CliResult<String> {
    match action {
        ExampleAction::List => {
            let entries: Vec<ExampleEntry> = ExampleId::ALL
                .iter()
                .map(|id| ExampleEntry {
                    id: id.as_str(),
                    description: id.description(),
                })
                .collect();
            match format.unwrap_or(Format::Json) {
                Format::Json => json(&entries),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = entries
                        .iter()
                        .map(|e| vec![e.id.to_string(), e.description.to_string()])
                        .collect();
                    csv_text(&["id", "description"], &rows)
                }
            }
        }
        ExampleAction::Show { id } => match format.unwrap_or(Format::Json) {
            Format::Json => Ok(model_to_json(&example_model(id))? + "\n"),
            Format::Csv => Err(CliError::Usage("model files are JSON only".into())),
        },
    }
}

#[derive(Serialize)]
struct SampleJson<'a> {
    p: usize,
    seed: Option<u64>,
    transformed: bool,
    x: Vec<&'a [f64]>,
    y: &'a [f64],
    #[serde(skip_serializing_if = "Option::is_none")]
    yprime: Option<&'a [f64]>,
}

fn rows_of(x: &[f64], p: usize) -> Vec<&[f64]> {
    x.chunks(p).collect()
}

fn dataset_text(data: &Dataset, format: Option<Format>) -> CliResult<String> {
    match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            data.write_csv(&mut buf)?;
            Ok(String::from_utf8(buf).expect("csv output is utf-8"))
        }
        Format::Json => json(&SampleJson {
            p: data.p(),
            seed: data.seed(),
            transformed: false,
            x: rows_of(data.x(), data.p()),
            y: data.y(),
            yprime: None,
        }),
    }
}

fn markov_text(data: &MarkovDataset, format: Option<Format>) -> CliResult<String> {
    match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            data.write_csv(&mut buf)?;
            Ok(String::from_utf8(buf).expect("csv output is utf-8"))
        }
        Format::Json => json(&SampleJson {
            p: data.p(),
            seed: data.seed(),
            transformed: data.is_transformed(),
            x: rows_of(data.x(), data.p()),
            y: data.y(),
            yprime: Some(data.y_prime()),
        }),
    }
}

fn exact(args: &ExactArgs, format: Option<Format>) -> CliResult<String> {
    let model = load_source(&args.source)?;
    let paths = match args.path {
        PathChoice::Definition => vec![MeasurePath::Definition],
        PathChoice::Markov => vec![MeasurePath::Markov],
        PathChoice::Both => vec![MeasurePath::Definition, MeasurePath::Markov],
    };
    let reports = paths
        .into_iter()
        .map(|p| exact_report(&model, p))
        .collect::<depmark::Result<Vec<_>>>()?;
    match format.unwrap_or(Format::Json) {
        Format::Json => json(&reports),
        Format::Csv => reports_csv(&reports),
    }
}

fn reports_csv(reports: &[MeasureReport]) -> CliResult<String> {
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                r.path.to_string(),
                opt(r.xi),
                opt(r.r2),
                opt(r.lambda),
                r.notes.join("; "),
            ]
        })
        .collect();
    csv_text(&["path", "xi", "r2", "lambda", "notes"], &rows)
}

fn estimate(args: &EstimateArgs, seed: u64, format: Option<Format>) -> CliResult<String> {
    let data = Dataset::load(&args.input)?;
    let which = MeasureSelection {
        xi: args.measures.contains(&Measure::Xi),
        r2: args.measures.contains(&Measure::R2),
        lambda: args.measures.contains(&Measure::Lambda),
    };
    let mut est = estimate_all(&data, seed, which)?;
    if args.clamp {
        est = est.clamped();
    }
    match format.unwrap_or(Format::Json) {
        Format::Json => json(&est),
        Format::Csv => csv_text(
            &["n", "xi", "r2", "lambda", "collision_hat", "seed", "notes"],
            &[vec![
                est.n.to_string(),
                opt(est.xi),
                opt(est.r2),
                opt(est.lambda),
                est.collision_hat.to_string(),
                est.seed.to_string(),
                est.notes.join("; "),
            ]],
        ),
    }
}

fn check(args: &CheckArgs, format: Option<Format>) -> CliResult<String> {
    let report = if let Some(id) = args.example {
        classify(&example_model(id))?
    } else if let Some(path) = &args.model {
        classify(&load_model(path)?)?
    } else if let Some(path) = &args.input {
        let mut data = MarkovDataset::load(path)?;
        if args.transformed && !data.is_transformed() {
            data = MarkovDataset::new(
                data.p(),
                data.x().to_vec(),
                data.y().to_vec(),
                data.y_prime().to_vec(),
                data.seed(),
                true,
            )?;
        }
        classify_sample(&data, args.block_tol)?
    } else {
        return Err(CliError::Usage("give --example, --model or --in".into()));
    };
    match format.unwrap_or(Format::Json) {
        Format::Json => json(&report),
        Format::Csv => check_csv(&report),
    }
}

fn check_csv(r: &CharacterizationReport) -> CliResult<String> {
    let row = |name: &str, d: &Decision| {
        vec![
            name.to_string(),
            d.flag.to_string(),
            d.statistic.to_string(),
            d.threshold.to_string(),
            d.measure_flag.map_or_else(String::new, |f| f.to_string()),
            opt(d.measure_value),
        ]
    };
    let rows = vec![
        row("independent", &r.independent),
        row("uncorrelated", &r.uncorrelated),
        row("concordance_balanced", &r.concordance_balanced),
        row("comonotone", &r.comonotone),
        row("completely_separated", &r.completely_separated.decision),
    ];
    csv_text(
        &[
            "property",
            "flag",
            "statistic",
            "threshold",
            "measure_flag",
            "measure_value",
        ],
        &rows,
    )
}
