//! Scatter data behind the seven figures, one CSV per panel.
//!
//! Figures 1-3 and 5-7 come from one Markov sample of a catalog model: the
//! `(X, Y)` panel is its first two columns, so both panels share draws.
//! Figure 4 is a 3-block ordinal sum on the unit square with independent
//! uniform blocks, together with three cut sets that all represent it.

use std::fs;
use std::path::{Path, PathBuf};

use depmark::markov::{sample_markov, transform_markov};
use depmark::{example_model, Dataset, ExampleId, MarkovDataset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands::csv_text;
use crate::CliResult;

/// What a figure shows.
#[derive(Clone, Copy, Debug)]
pub struct FigureSpec {
    pub id: u8,
    pub example: Option<ExampleId>,
    pub panels: &'static [&'static str],
}

const PAIR: &[&str] = &["xy", "markov"];
const SQUARED: &[&str] = &["xy", "markov", "xy_squared", "markov_squared"];
const TRANSFORMED: &[&str] = &["xy", "markov", "xy_transformed", "markov_transformed"];

pub const FIGURES: [FigureSpec; 7] = [
    FigureSpec {
        id: 1,
        example: Some(ExampleId::Ex2_4),
        panels: PAIR,
    },
    FigureSpec {
        id: 2,
        example: Some(ExampleId::Ex2_5),
        panels: PAIR,
    },
    FigureSpec {
        id: 3,
        example: Some(ExampleId::Ex2_6),
        panels: SQUARED,
    },
    FigureSpec {
        id: 4,
        example: None,
        panels: &["sample", "cuts"],
    },
    FigureSpec {
        id: 5,
        example: Some(ExampleId::Ex3_3),
        panels: TRANSFORMED,
    },
    FigureSpec {
        id: 6,
        example: Some(ExampleId::Ex3_4),
        panels: TRANSFORMED,
    },
    FigureSpec {
        id: 7,
        example: Some(ExampleId::Ex3_5),
        panels: TRANSFORMED,
    },
];

/// Block boundaries of the figure 4 construction.
pub const ORDINAL_BREAKS: [f64; 4] = [0.0, 0.3, 0.55, 1.0];
/// Cut sets of the three representations shown in figure 4.
pub const ORDINAL_CUT_SETS: [&[f64]; 3] = [&[0.3, 0.55], &[0.55], &[0.3]];

/// Default sample size of a figure.
pub fn default_size(id: u8) -> usize {
    if id == 4 {
        2000
    } else {
        1000
    }
}

/// File name of a panel.
pub fn panel_file(id: u8, panel: &str) -> String {
    format!("fig{id}_{panel}.csv")
}

/// Writes every panel of figure `id` into `out_dir` and returns the paths.
pub fn emit_figure_data(id: u8, n: usize, seed: u64, out_dir: &Path) -> CliResult<Vec<PathBuf>> {
    let spec = FIGURES
        .iter()
        .find(|f| f.id == id)
        .ok_or_else(|| depmark::Error::Domain(format!("figure must be 1 to 7, got {id}")))?;
    if n == 0 {
        return Err(depmark::Error::Count("figure sample size must be positive".into()).into());
    }
    let texts = match spec.example {
        Some(example) => model_panels(spec, example, n, seed)?,
        None => ordinal_sum_panels(n, seed)?,
    };
    fs::create_dir_all(out_dir)?;
    let mut files = Vec::with_capacity(texts.len());
    for (panel, text) in spec.panels.iter().zip(texts) {
        let path = out_dir.join(panel_file(id, panel));
        fs::write(&path, text)?;
        files.push(path);
    }
    Ok(files)
}

fn dataset_csv(d: &Dataset) -> CliResult<String> {
    let mut buf = Vec::new();
    d.write_csv(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// Plain CSV without the transformed marker, so any reader loads it.
fn markov_csv(d: &MarkovDataset) -> CliResult<String> {
    let plain = MarkovDataset::new(
        d.p(),
        d.x().to_vec(),
        d.y().to_vec(),
        d.y_prime().to_vec(),
        d.seed(),
        false,
    )?;
    let mut buf = Vec::new();
    plain.write_csv(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn model_panels(
    spec: &FigureSpec,
    example: ExampleId,
    n: usize,
    seed: u64,
) -> CliResult<Vec<String>> {
    let model = example_model(example);
    let markov = sample_markov(&model, n, seed)?;
    let mut texts = vec![dataset_csv(&markov.xy())?, markov_csv(&markov)?];
    if spec.panels == SQUARED {
        let sq = |v: &[f64]| v.iter().map(|y| y * y).collect::<Vec<f64>>();
        let squared = MarkovDataset::new(
            markov.p(),
            markov.x().to_vec(),
            sq(markov.y()),
            sq(markov.y_prime()),
            markov.seed(),
            false,
        )?;
        texts.push(dataset_csv(&squared.xy())?);
        texts.push(markov_csv(&squared)?);
    } else if spec.panels == TRANSFORMED {
        let t = transform_markov(&model, &markov)?;
        texts.push(dataset_csv(&t.xy())?);
        texts.push(markov_csv(&t)?);
    }
    Ok(texts)
}

/// Draws `n` points of the figure 4 ordinal sum: `u` uniform on `(0, 1]`,
/// `v` uniform on the block `(a, b]` containing `u`.
pub fn ordinal_sum_sample(n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let u = 1.0 - rng.random::<f64>();
            let k = ORDINAL_BREAKS[1..].partition_point(|&b| b < u);
            let (a, b) = (ORDINAL_BREAKS[k], ORDINAL_BREAKS[k + 1]);
            let v = b - (b - a) * rng.random::<f64>();
            (u, v)
        })
        .collect()
}

fn ordinal_sum_panels(n: usize, seed: u64) -> CliResult<Vec<String>> {
    let points = ordinal_sum_sample(n, seed);
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|(u, v)| vec![u.to_string(), v.to_string()])
        .collect();
    let sample = csv_text(&["u", "v"], &rows)?;
    let mut cut_rows = Vec::new();
    for (r, cuts) in ORDINAL_CUT_SETS.iter().enumerate() {
        let mut ends = vec![0.0];
        ends.extend_from_slice(cuts);
        ends.push(1.0);
        for (k, w) in ends.windows(2).enumerate() {
            let inside = points
                .iter()
                .filter(|&&(u, v)| u > w[0] && u <= w[1] && v > w[0] && v <= w[1])
                .count();
            cut_rows.push(vec![
                (r + 1).to_string(),
                (k + 1).to_string(),
                w[0].to_string(),
                w[1].to_string(),
                (inside as f64 / n as f64).to_string(),
            ]);
        }
    }
    let cuts = csv_text(&["representation", "block", "a", "b", "mass"], &cut_rows)?;
    Ok(vec![sample, cuts])
}
