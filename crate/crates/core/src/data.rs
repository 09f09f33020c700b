//! Samples of `(X, Y)` and of Markov triples `(X, Y, Y')`, with CSV I/O.
//!
//! Predictor values are stored row-major in one flat vector of length `n·p`.
//! Numbers are written with Rust's shortest round-trip formatting, so a
//! write/read cycle reproduces every value bit for bit.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Marker line following the header of a transformed Markov CSV.
pub const TRANSFORMED_MARKER: &str = "# transformed=true";

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    p: usize,
    x: Vec<f64>,
    y: Vec<f64>,
    seed: Option<u64>,
}

impl Dataset {
    pub fn new(p: usize, x: Vec<f64>, y: Vec<f64>, seed: Option<u64>) -> Result<Self> {
        check_shape(p, &x, y.len())?;
        check_finite(&[&x, &y])?;
        Ok(Dataset { p, x, y, seed })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Flat row-major predictor values.
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn x_row(&self, i: usize) -> &[f64] {
        &self.x[i * self.p..(i + 1) * self.p]
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Same predictors with a new response column.
    pub fn with_y(&self, y: Vec<f64>) -> Result<Self> {
        Dataset::new(self.p, self.x.clone(), y, self.seed)
    }

    /// Rows reordered so that row `i` of the result is row `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let (x, y) = permute_rows(self.p, &self.x, &self.y, perm)?;
        Dataset::new(self.p, x, y, self.seed)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_rows(out, self.p, &self.x, &[&self.y], &["y"], false)
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let table = read_table(input)?;
        let (p, x, mut cols) = table.split(&["y"])?;
        Dataset::new(p, x, cols.remove(0), None)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        fs::write(path, buf)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Dataset::read_csv(fs::File::open(path)?)
    }
}

/// Triples `(x, y, y')` where `y'` is a conditionally independent copy of `y` given `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovDataset {
    p: usize,
    x: Vec<f64>,
    y: Vec<f64>,
    y_prime: Vec<f64>,
    seed: Option<u64>,
    transformed: bool,
}

impl MarkovDataset {
    pub fn new(
        p: usize,
        x: Vec<f64>,
        y: Vec<f64>,
        y_prime: Vec<f64>,
        seed: Option<u64>,
        transformed: bool,
    ) -> Result<Self> {
        check_shape(p, &x, y.len())?;
        check_finite(&[&x, &y, &y_prime])?;
        if y_prime.len() != y.len() {
            return Err(Error::Dimension(format!(
                "y has {} rows but yprime has {}",
                y.len(),
                y_prime.len()
            )));
        }
        if transformed && y.iter().chain(&y_prime).any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Domain(
                "transformed values must lie in [0, 1]".into(),
            ));
        }
        Ok(MarkovDataset {
            p,
            x,
            y,
            y_prime,
            seed,
            transformed,
        })
    }

    /// Pairs `(u, v)` with no predictor column, as used by structure detection.
    pub fn from_pairs(y: Vec<f64>, y_prime: Vec<f64>, transformed: bool) -> Result<Self> {
        let x = vec![0.0; y.len()];
        MarkovDataset::new(1, x, y, y_prime, None, transformed)
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn x_row(&self, i: usize) -> &[f64] {
        &self.x[i * self.p..(i + 1) * self.p]
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn y_prime(&self) -> &[f64] {
        &self.y_prime
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn is_transformed(&self) -> bool {
        self.transformed
    }

    /// The `(x, y)` part as a plain dataset.
    pub fn xy(&self) -> Dataset {
        Dataset {
            p: self.p,
            x: self.x.clone(),
            y: self.y.clone(),
            seed: self.seed,
        }
    }

    /// Copy with `y` and `y'` exchanged.
    pub fn swapped(&self) -> Self {
        MarkovDataset {
            y: self.y_prime.clone(),
            y_prime: self.y.clone(),
            ..self.clone()
        }
    }

    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let (x, y) = permute_rows(self.p, &self.x, &self.y, perm)?;
        let y_prime = perm.iter().map(|&i| self.y_prime[i]).collect();
        MarkovDataset::new(self.p, x, y, y_prime, self.seed, self.transformed)
    }

    pub(crate) fn with_values(
        &self,
        y: Vec<f64>,
        y_prime: Vec<f64>,
        transformed: bool,
    ) -> Result<Self> {
        MarkovDataset::new(self.p, self.x.clone(), y, y_prime, self.seed, transformed)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_rows(
            out,
            self.p,
            &self.x,
            &[&self.y, &self.y_prime],
            &["y", "yprime"],
            self.transformed,
        )
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let table = read_table(input)?;
        let transformed = table.transformed;
        let (p, x, mut cols) = table.split(&["y", "yprime"])?;
        let y_prime = cols.pop().unwrap_or_default();
        let y = cols.pop().unwrap_or_default();
        MarkovDataset::new(p, x, y, y_prime, None, transformed)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        fs::write(path, buf)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        MarkovDataset::read_csv(fs::File::open(path)?)
    }
}

fn check_shape(p: usize, x: &[f64], n: usize) -> Result<()> {
    if p == 0 {
        return Err(Error::Dimension(
            "predictor dimension must be positive".into(),
        ));
    }
    if x.len() != n * p {
        return Err(Error::Dimension(format!(
            "{} predictor values do not form {n} rows of length {p}",
            x.len()
        )));
    }
    Ok(())
}

fn check_finite(columns: &[&[f64]]) -> Result<()> {
    if columns.iter().any(|c| c.iter().any(|v| !v.is_finite())) {
        return Err(Error::Domain("data values must be finite".into()));
    }
    Ok(())
}

fn permute_rows(p: usize, x: &[f64], y: &[f64], perm: &[usize]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut seen = vec![false; y.len()];
    if perm.len() != y.len()
        || perm
            .iter()
            .any(|&i| i >= y.len() || std::mem::replace(&mut seen[i], true))
    {
        return Err(Error::Dimension("not a permutation of the rows".into()));
    }
    let mut px = Vec::with_capacity(x.len());
    for &i in perm {
        px.extend_from_slice(&x[i * p..(i + 1) * p]);
    }
    Ok((px, perm.iter().map(|&i| y[i]).collect()))
}

fn write_rows<W: Write>(
    out: W,
    p: usize,
    x: &[f64],
    cols: &[&Vec<f64>],
    names: &[&str],
    transformed: bool,
) -> Result<()> {
    let mut out = std::io::BufWriter::new(out);
    let header: Vec<String> = (1..=p)
        .map(|j| format!("x{j}"))
        .chain(names.iter().map(|s| s.to_string()))
        .collect();
    writeln!(out, "{}", header.join(","))?;
    if transformed {
        writeln!(out, "{TRANSFORMED_MARKER}")?;
    }
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    let n = cols.first().map_or(0, |c| c.len());
    let mut record: Vec<String> = Vec::with_capacity(p + cols.len());
    for i in 0..n {
        record.clear();
        record.extend(x[i * p..(i + 1) * p].iter().map(|v| v.to_string()));
        record.extend(cols.iter().map(|c| c[i].to_string()));
        wtr.write_record(&record)?;
    }
    wtr.flush()?;
    Ok(())
}

struct Table {
    header: Vec<String>,
    columns: Vec<Vec<f64>>,
    transformed: bool,
}

impl Table {
    /// Splits into `x1..xp` (row-major) and the named trailing columns.
    fn split(self, names: &[&str]) -> Result<(usize, Vec<f64>, Vec<Vec<f64>>)> {
        let k = names.len();
        if self.header.len() <= k {
            return Err(Error::Parse(format!(
                "expected columns x1..xp,{}",
                names.join(",")
            )));
        }
        let p = self.header.len() - k;
        for (j, h) in self.header[..p].iter().enumerate() {
            if h.trim() != format!("x{}", j + 1) {
                return Err(Error::Parse(format!(
                    "unexpected column '{h}', expected x{}",
                    j + 1
                )));
            }
        }
        for (h, name) in self.header[p..].iter().zip(names) {
            if h.trim() != *name {
                return Err(Error::Parse(format!(
                    "unexpected column '{h}', expected {name}"
                )));
            }
        }
        let n = self.columns.first().map_or(0, |c| c.len());
        let mut x = Vec::with_capacity(n * p);
        for i in 0..n {
            x.extend(self.columns[..p].iter().map(|c| c[i]));
        }
        let tail = self.columns.into_iter().skip(p).collect();
        Ok((p, x, tail))
    }
}

fn read_table<R: Read>(mut input: R) -> Result<Table> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let transformed = text.lines().any(|l| l.trim() == TRANSFORMED_MARKER);
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let mut columns = vec![Vec::new(); header.len()];
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() != header.len() {
            return Err(Error::Parse(format!(
                "row {} has {} fields, expected {}",
                line + 1,
                record.len(),
                header.len()
            )));
        }
        for (col, field) in columns.iter_mut().zip(record.iter()) {
            let v: f64 = field.parse().map_err(|_| {
                Error::Parse(format!("row {}: '{field}' is not a number", line + 1))
            })?;
            col.push(v);
        }
    }
    Ok(Table {
        header,
        columns,
        transformed,
    })
}
