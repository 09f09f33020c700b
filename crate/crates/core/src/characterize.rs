//! Checks for the five extreme dependence concepts, on exact models and on
//! sampled Markov products.
//!
//! | concept                | measure route | Markov-product route              |
//! |------------------------|---------------|-----------------------------------|
//! | independence           | ξ = 0         | `H = F ⊗ F`                       |
//! | zero explainability    | R² = 0        | `ρ(Y, Y') = 0`                    |
//! | stochastic comparability | Λ = 0       | concordance = discordance         |
//! | perfect dependence     | ξ = 1         | `H = min(F, F)`                   |
//! | complete separation    | Λ = 1         | ordinal-sum structure of `(F_Y(Y), F_Y(Y'))` |

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::MarkovDataset;
use crate::error::{Error, Result};
use crate::estimate::concordance_counts;
use crate::exact::{
    concordance_difference, lambda_exact, r2_exact, r2_via_markov, response_breaks, xi_exact,
};
use crate::law::CdfTable;
use crate::markov::{empirical_transform, MarkovCdf};
use crate::model::DistributionModel;

/// Empirical independence threshold `c / √n`.
pub const INDEPENDENCE_C: f64 = 2.5;
/// Empirical concordance-balance threshold `c / √n`.
pub const BALANCE_C: f64 = 3.0;
/// Empirical zero-correlation threshold `c / √n`.
pub const CORRELATION_C: f64 = 3.0;
/// Threshold `c / √n` for uniformity of the diagonal component.
pub const DIAGONAL_UNIFORM_C: f64 = 1.95;
/// Tolerance for exact-mode flags.
pub const EXACT_FLAG_TOL: f64 = 1e-9;
/// Tolerance for the exact comonotonicity grid check.
pub const COMONOTONE_TOL: f64 = 1e-10;
/// Default `|u − v|` below which a transformed point counts as diagonal.
pub const BLOCK_TOL: f64 = 1e-9;

/// Side length of the empirical-quantile grid used by the independence statistic.
const GRID: usize = 20;
/// Uniform grid size for the exact ordinal-sum check.
const ORDINAL_GRID: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Exact,
    Empirical,
}

/// Diagonal block `(a, b]` of an ordinal sum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub a: f64,
    pub b: f64,
    pub mass: f64,
    /// Empirical: sup-grid distance from within-block independence.
    /// Exact: largest factorization residual.
    pub independence_stat: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrdinalSumStructure {
    pub cuts: Vec<f64>,
    pub blocks: Vec<Block>,
    pub diagonal_mass: f64,
    /// Empirical: Kolmogorov distance of the rescaled diagonal values from
    /// uniform. Exact: largest residual of the ordinal-sum identity.
    pub diagonal_uniform_stat: f64,
}

impl OrdinalSumStructure {
    pub fn size(&self) -> usize {
        self.blocks.len()
    }
}

/// One flag with the statistic and threshold that decided it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub flag: bool,
    pub statistic: f64,
    pub threshold: f64,
    /// Exact mode: the flag from the measure value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure_flag: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure_value: Option<f64>,
}

impl Decision {
    fn below(statistic: f64, threshold: f64) -> Self {
        Decision {
            flag: statistic <= threshold,
            statistic,
            threshold,
            measure_flag: None,
            measure_value: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationDecision {
    #[serde(flatten)]
    pub decision: Decision,
    pub structure: OrdinalSumStructure,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterizationReport {
    pub mode: CheckMode,
    pub independent: Decision,
    pub uncorrelated: Decision,
    pub concordance_balanced: Decision,
    pub comonotone: Decision,
    pub completely_separated: SeparationDecision,
    pub notes: Vec<String>,
}

impl CharacterizationReport {
    /// Flags in the order independent, uncorrelated, balanced, comonotone, separated.
    pub fn flags(&self) -> [bool; 5] {
        [
            self.independent.flag,
            self.uncorrelated.flag,
            self.concordance_balanced.flag,
            self.comonotone.flag,
            self.completely_separated.decision.flag,
        ]
    }

    /// Whether both exact routes agree on every flag that has a measure route.
    pub fn routes_agree(&self) -> bool {
        [
            &self.independent,
            &self.uncorrelated,
            &self.concordance_balanced,
            &self.comonotone,
            &self.completely_separated.decision,
        ]
        .iter()
        .all(|d| d.measure_flag.is_none_or(|m| m == d.flag))
    }
}

fn sqrt_threshold(c: f64, n: usize) -> f64 {
    c / (n as f64).sqrt()
}

// ---------------------------------------------------------------------------
// empirical statistics

/// Thresholds at the empirical `k / GRID` quantiles, `k = 1 .. GRID − 1`.
fn quantile_grid(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut grid: Vec<f64> = (1..GRID)
        .map(|k| sorted[(k * n).div_ceil(GRID).max(1) - 1])
        .collect();
    grid.dedup();
    grid
}

/// `sup |Ĥ(s, t) − F̂(s) Ĝ(t)|` over the empirical-quantile grid.
fn grid_independence(u: &[f64], v: &[f64]) -> f64 {
    let n = u.len();
    if n == 0 {
        return 0.0;
    }
    let (gu, gv) = (quantile_grid(u), quantile_grid(v));
    let (ku, kv) = (gu.len() + 1, gv.len() + 1);
    // counts[i][j]: points whose first grid threshold at or above them is i and j
    let mut counts = vec![0u64; ku * kv];
    for (&a, &b) in u.iter().zip(v) {
        let i = gu.partition_point(|&t| t < a);
        let j = gv.partition_point(|&t| t < b);
        counts[i * kv + j] += 1;
    }
    let mut cum = vec![0u64; ku * kv];
    for i in 0..ku {
        for j in 0..kv {
            let mut c = counts[i * kv + j];
            if i > 0 {
                c += cum[(i - 1) * kv + j];
            }
            if j > 0 {
                c += cum[i * kv + j - 1];
            }
            if i > 0 && j > 0 {
                c -= cum[(i - 1) * kv + j - 1];
            }
            cum[i * kv + j] = c;
        }
    }
    let nf = n as f64;
    let mut sup: f64 = 0.0;
    for i in 0..gu.len() {
        let fu = cum[i * kv + kv - 1] as f64 / nf;
        for j in 0..gv.len() {
            let fv = cum[(ku - 1) * kv + j] as f64 / nf;
            let h = cum[i * kv + j] as f64 / nf;
            sup = sup.max((h - fu * fv).abs());
        }
    }
    sup
}

/// Sup distance between the joint empirical CDF of `(y, y')` and the product
/// of its margins on a 20 × 20 empirical-quantile grid.
pub fn independence_stat(pairs: &MarkovDataset) -> Result<f64> {
    if pairs.n() < 10 {
        return Err(Error::Count(format!(
            "independence statistic needs at least 10 rows, got {}",
            pairs.n()
        )));
    }
    Ok(grid_independence(pairs.y(), pairs.y_prime()))
}

/// `(C − D) / (n(n−1)/2)` for the pairs `(y_i, y'_i)`.
pub fn concordance_balance(pairs: &MarkovDataset) -> Result<f64> {
    if pairs.n() < 2 {
        return Err(Error::Count(
            "concordance balance needs at least 2 rows".into(),
        ));
    }
    Ok(concordance_counts(pairs.y(), pairs.y_prime()).normalized())
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    (saa > 0.0 && sbb > 0.0).then(|| sab / (saa * sbb).sqrt())
}

/// Input of [`comonotone_check`].
#[derive(Clone, Copy, Debug)]
pub enum ComonotoneInput<'a> {
    Model(&'a DistributionModel),
    Pairs(&'a MarkovDataset),
}

/// Exact mode: `sup |H(y, y') − min(F(y), F(y'))|` on a response grid.
/// Empirical mode: `max |y_i − y'_i|`, which must be exactly zero.
pub fn comonotone_check(input: ComonotoneInput<'_>) -> Decision {
    match input {
        ComonotoneInput::Model(model) => {
            let grid = ResponseGrid::new(model);
            Decision::below(grid.sup(|h, f1, f2| (h - f1.min(f2)).abs()), COMONOTONE_TOL)
        }
        ComonotoneInput::Pairs(pairs) => {
            let stat = pairs
                .y()
                .iter()
                .zip(pairs.y_prime())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            Decision::below(stat, 0.0)
        }
    }
}

// ---------------------------------------------------------------------------
// ordinal-sum detection on samples

/// Finest ordinal-sum structure visible in a transformed Markov sample.
///
/// A gap between consecutive distinct pooled values is a cut unless some
/// point straddles it (`min(u, v) <= c < max(u, v)`). Groups between cuts
/// with at least two off-diagonal points (`|u − v| > block_tol`) become
/// blocks; the remaining groups form the diagonal component.
pub fn ordinal_sum_detect(pairs: &MarkovDataset, block_tol: f64) -> Result<OrdinalSumStructure> {
    if !pairs.is_transformed() {
        return Err(Error::State(
            "ordinal-sum detection needs transformed pairs".into(),
        ));
    }
    if pairs.n() < 20 {
        return Err(Error::Count(format!(
            "ordinal-sum detection needs at least 20 rows, got {}",
            pairs.n()
        )));
    }
    let (u, v) = (pairs.y(), pairs.y_prime());
    let n = u.len();
    let mut values: Vec<f64> = u.iter().chain(v).copied().collect();
    values.par_sort_unstable_by(f64::total_cmp);
    values.dedup();
    let m = values.len();
    let index = |x: f64| values.partition_point(|&s| s < x);

    // blocked[k] > 0 iff some point straddles the gap after values[k]
    let mut diff = vec![0i64; m + 1];
    let mut low_of = Vec::with_capacity(n);
    for (&a, &b) in u.iter().zip(v) {
        let (lo, hi) = (index(a.min(b)), index(a.max(b)));
        diff[lo] += 1;
        diff[hi] -= 1;
        low_of.push(lo);
    }
    let mut group_end = Vec::new();
    let mut running = 0;
    for (k, d) in diff.iter().take(m).enumerate() {
        running += d;
        if running == 0 {
            group_end.push(k);
        }
    }
    // group of each point, by its lower coordinate
    let group_of = |lo: usize| group_end.partition_point(|&e| e < lo);
    let groups = group_end.len();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); groups];
    for (i, &lo) in low_of.iter().enumerate() {
        members[group_of(lo)].push(i);
    }

    let upper = |g: usize| {
        if g + 1 == groups {
            1.0
        } else {
            values[group_end[g]]
        }
    };
    let lower = |g: usize| {
        if g == 0 {
            0.0
        } else {
            values[group_end[g - 1]]
        }
    };
    let mut blocks = Vec::new();
    let mut diagonal: Vec<(f64, f64)> = Vec::new();
    let mut diagonal_points = Vec::new();
    for (g, rows) in members.iter().enumerate() {
        if rows.is_empty() {
            continue;
        }
        let off = rows
            .iter()
            .filter(|&&i| (u[i] - v[i]).abs() > block_tol)
            .count();
        if off >= 2 {
            let bu: Vec<f64> = rows.iter().map(|&i| u[i]).collect();
            let bv: Vec<f64> = rows.iter().map(|&i| v[i]).collect();
            blocks.push(Block {
                a: lower(g),
                b: upper(g),
                mass: rows.len() as f64 / n as f64,
                independence_stat: grid_independence(&bu, &bv),
            });
        } else {
            diagonal.push((lower(g), upper(g)));
            diagonal_points.extend(rows.iter().map(|&i| u[i]));
        }
    }

    let mut cuts: Vec<f64> = blocks
        .iter()
        .flat_map(|b| [b.a, b.b])
        .filter(|&c| c > 0.0 && c < 1.0)
        .collect();
    cuts.dedup();
    let diagonal_mass = diagonal_points.len() as f64 / n as f64;
    let diagonal_uniform_stat = diagonal_uniformity(&diagonal, &mut diagonal_points);
    Ok(OrdinalSumStructure {
        cuts,
        blocks,
        diagonal_mass,
        diagonal_uniform_stat,
    })
}

/// Kolmogorov distance of `points` from the uniform law on the union of `intervals`.
fn diagonal_uniformity(intervals: &[(f64, f64)], points: &mut [f64]) -> f64 {
    let total: f64 = intervals.iter().map(|(a, b)| b - a).sum();
    if points.is_empty() || total <= 0.0 {
        return 0.0;
    }
    let rescale = |x: f64| {
        let below: f64 = intervals
            .iter()
            .map(|&(a, b)| (x.min(b) - a).max(0.0))
            .sum();
        below / total
    };
    points.sort_by(f64::total_cmp);
    let n = points.len() as f64;
    let mut sup: f64 = 0.0;
    let mut i = 0;
    while i < points.len() {
        let mut j = i + 1;
        while j < points.len() && points[j] == points[i] {
            j += 1;
        }
        let t = rescale(points[i]);
        sup = sup
            .max((i as f64 / n - t).abs())
            .max((j as f64 / n - t).abs());
        i = j;
    }
    sup
}

/// Whether a detected structure passes every empirical threshold. A single
/// block holding the whole sample does not count as separation.
fn structure_verdict(s: &OrdinalSumStructure, n: usize) -> Decision {
    let mut stat: f64 = 0.0;
    for b in &s.blocks {
        let nb = (b.mass * n as f64).round() as usize;
        stat = stat.max(b.independence_stat / sqrt_threshold(INDEPENDENCE_C, nb.max(1)));
    }
    let nd = (s.diagonal_mass * n as f64).round() as usize;
    if nd > 0 {
        stat = stat.max(s.diagonal_uniform_stat / sqrt_threshold(DIAGONAL_UNIFORM_C, nd));
    }
    let trivial = s.blocks.len() == 1 && nd == 0;
    let mut d = Decision::below(stat, 1.0);
    d.flag &= !trivial;
    d
}

// ---------------------------------------------------------------------------
// exact ordinal sum

/// Candidate ordinal-sum structure of a model and the outcome of its verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactOrdinalSum {
    pub structure: OrdinalSumStructure,
    pub separated: bool,
    /// Largest residual over all checks.
    pub residual: f64,
}

/// Builds one block per predictor atom, of width equal to the atom's mass and
/// ending at `F_Y` of the top of its conditional support, then verifies on a
/// grid that the transformed Markov product is the ordinal sum of those
/// blocks: block masses, the identity with the Lebesgue diagonal term, and
/// within-block factorization.
pub fn ordinal_sum_exact(model: &DistributionModel) -> ExactOrdinalSum {
    let cdf = MarkovCdf::new(model);
    let table = cdf.table();
    let mut spans: Vec<(f64, f64)> = model
        .atom_parts()
        .map(|(atom, law)| {
            let b = table.cdf(law.support().1);
            (b - atom.mass, b)
        })
        .collect();
    spans.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.total_cmp(&y.0)));
    let overlap = spans
        .iter()
        .enumerate()
        .any(|(k, &(a, _))| a < if k == 0 { 0.0 } else { spans[k - 1].1 } - EXACT_FLAG_TOL);

    let mut grid: Vec<f64> = (0..=ORDINAL_GRID)
        .map(|k| k as f64 / ORDINAL_GRID as f64)
        .collect();
    for &(a, b) in &spans {
        grid.extend([
            a,
            b,
            a + 0.25 * (b - a),
            a + 0.5 * (b - a),
            a + 0.75 * (b - a),
        ]);
    }
    grid.retain(|&g| (0.0..=1.0).contains(&g));
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let m = grid.len();
    let h: Vec<f64> = (0..m * m)
        .into_par_iter()
        .map(|k| cdf.transformed(grid[k / m], grid[k % m]))
        .collect();
    let at = |x: f64| grid.partition_point(|&g| g < x).min(m - 1);
    let hv = |i: usize, j: usize| h[i * m + j];
    // rectangle mass of (a, u] × (a, v] in grid indices
    let rect = |ia: usize, iu: usize, iv: usize| hv(iu, iv) - hv(ia, iv) - hv(iu, ia) + hv(ia, ia);

    let idx: Vec<(usize, usize)> = spans
        .iter()
        .map(|&(a, b)| (at(a.max(0.0)), at(b)))
        .collect();
    let mut blocks = Vec::with_capacity(spans.len());
    let mut residual: f64 = 0.0;
    for (k, &(a, b)) in spans.iter().enumerate() {
        let (ia, ib) = idx[k];
        let whole = rect(ia, ib, ib);
        residual = residual.max((whole - (b - a)).abs());
        let mut fac: f64 = 0.0;
        for iu in ia + 1..=ib {
            for iv in ia + 1..=ib {
                fac =
                    fac.max((rect(ia, iu, iv) * whole - rect(ia, iu, ib) * rect(ia, ib, iv)).abs());
            }
        }
        residual = residual.max(fac);
        blocks.push(Block {
            a,
            b,
            mass: b - a,
            independence_stat: fac,
        });
    }

    let identity: f64 = (0..m * m)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / m, k % m);
            let w = grid[i].min(grid[j]);
            let mut f = w;
            for (s, &(a, b)) in spans.iter().enumerate() {
                f -= (w.min(b) - a).max(0.0);
                let (ia, ib) = idx[s];
                let cu = if grid[i] <= a { ia } else { i.min(ib) };
                let cv = if grid[j] <= a { ia } else { j.min(ib) };
                f += rect(ia, cu, cv);
            }
            (f - hv(i, j)).abs()
        })
        .reduce(|| 0.0, f64::max);
    residual = residual.max(identity);

    let mut cuts: Vec<f64> = spans
        .iter()
        .flat_map(|&(a, b)| [a, b])
        .filter(|&c| c > 0.0 && c < 1.0)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| (*x - *y).abs() <= EXACT_FLAG_TOL);
    let mass: f64 = blocks.iter().map(|b| b.mass).sum();
    let structure = OrdinalSumStructure {
        cuts,
        blocks,
        diagonal_mass: (1.0 - mass).max(0.0),
        diagonal_uniform_stat: identity,
    };
    ExactOrdinalSum {
        structure,
        separated: !overlap && residual <= EXACT_FLAG_TOL,
        residual,
    }
}

// ---------------------------------------------------------------------------
// exact classification

/// Response grid: breakpoints of the Markov product plus three interior points per cell.
struct ResponseGrid {
    h: Vec<f64>,
    f: Vec<f64>,
}

impl ResponseGrid {
    fn new(model: &DistributionModel) -> Self {
        let cdf = MarkovCdf::new(model);
        let breaks = response_breaks(model, cdf.marginal());
        let mut ys = breaks.clone();
        for w in breaks.windows(2) {
            ys.extend([0.25, 0.5, 0.75].map(|t| w[0] + t * (w[1] - w[0])));
        }
        ys.sort_by(f64::total_cmp);
        ys.dedup();
        let m = ys.len();
        let table: &CdfTable = cdf.table();
        let f = ys.iter().map(|&y| table.cdf(y)).collect();
        let h = (0..m * m)
            .into_par_iter()
            .map(|k| cdf.at(ys[k / m], ys[k % m]))
            .collect();
        ResponseGrid { h, f }
    }

    fn sup(&self, g: impl Fn(f64, f64, f64) -> f64 + Sync) -> f64 {
        let m = self.f.len();
        (0..m * m)
            .into_par_iter()
            .map(|k| g(self.h[k], self.f[k / m], self.f[k % m]))
            .reduce(|| 0.0, f64::max)
    }
}

fn with_measure(mut d: Decision, value: Option<f64>, target: f64) -> Decision {
    d.measure_value = value;
    d.measure_flag = value.map(|v| (v - target).abs() <= EXACT_FLAG_TOL);
    d
}

/// Exact-mode flags for all five concepts, each decided from the measure
/// value and, independently, from the Markov product. Disagreements are noted.
pub fn classify(model: &DistributionModel) -> Result<CharacterizationReport> {
    let xi = xi_exact(model)?.xi;
    let r2 = r2_exact(model)?.r2;
    let mut notes = Vec::new();
    let lambda = match lambda_exact(model) {
        Ok(r) => r.lambda,
        Err(Error::Degenerate(msg)) => {
            notes.push(format!("lambda undefined: {msg}"));
            None
        }
        Err(e) => return Err(e),
    };

    let grid = ResponseGrid::new(model);
    let independent = with_measure(
        Decision::below(grid.sup(|h, f1, f2| (h - f1 * f2).abs()), EXACT_FLAG_TOL),
        xi,
        0.0,
    );
    let rho = r2_via_markov(model)?.r2.unwrap_or(0.0);
    let uncorrelated = with_measure(Decision::below(rho.abs(), EXACT_FLAG_TOL), r2, 0.0);
    let balance = concordance_difference(model);
    let concordance_balanced =
        with_measure(Decision::below(balance.abs(), EXACT_FLAG_TOL), lambda, 0.0);
    let comonotone = with_measure(comonotone_check(ComonotoneInput::Model(model)), xi, 1.0);
    let ordinal = ordinal_sum_exact(model);
    let separated = with_measure(
        Decision {
            flag: ordinal.separated,
            statistic: ordinal.residual,
            threshold: EXACT_FLAG_TOL,
            measure_flag: None,
            measure_value: None,
        },
        lambda,
        1.0,
    );

    let report = CharacterizationReport {
        mode: CheckMode::Exact,
        independent,
        uncorrelated,
        concordance_balanced,
        comonotone,
        completely_separated: SeparationDecision {
            decision: separated,
            structure: ordinal.structure,
        },
        notes,
    };
    Ok(with_disagreements(report))
}

fn with_disagreements(mut report: CharacterizationReport) -> CharacterizationReport {
    let named = [
        ("independent", &report.independent),
        ("uncorrelated", &report.uncorrelated),
        ("concordance_balanced", &report.concordance_balanced),
        ("comonotone", &report.comonotone),
        (
            "completely_separated",
            &report.completely_separated.decision,
        ),
    ];
    let mut extra = Vec::new();
    for (name, d) in named {
        if let Some(m) = d.measure_flag.filter(|&m| m != d.flag) {
            extra.push(format!(
                "{name}: measure route says {m}, Markov route says {}",
                d.flag
            ));
        }
    }
    report.notes.extend(extra);
    report
}

/// Empirical-mode flags from a Markov sample. Structure detection runs on
/// the sample itself when it is already transformed, and on its empirical
/// transform otherwise.
pub fn classify_sample(pairs: &MarkovDataset, block_tol: f64) -> Result<CharacterizationReport> {
    let n = pairs.n();
    if n < 20 {
        return Err(Error::Count(format!(
            "empirical classification needs at least 20 rows, got {n}"
        )));
    }
    let mut notes = Vec::new();
    let independent = Decision::below(independence_stat(pairs)?, sqrt_threshold(INDEPENDENCE_C, n));
    let rho = pearson(pairs.y(), pairs.y_prime()).unwrap_or_else(|| {
        notes.push("correlation undefined: a column is constant".into());
        0.0
    });
    let uncorrelated = Decision::below(rho.abs(), sqrt_threshold(CORRELATION_C, n));
    let concordance_balanced = Decision::below(
        concordance_balance(pairs)?.abs(),
        sqrt_threshold(BALANCE_C, n),
    );
    let comonotone = comonotone_check(ComonotoneInput::Pairs(pairs));
    let transformed = if pairs.is_transformed() {
        pairs.clone()
    } else {
        empirical_transform(pairs)?
    };
    let structure = ordinal_sum_detect(&transformed, block_tol)?;
    let separated = structure_verdict(&structure, n);
    Ok(CharacterizationReport {
        mode: CheckMode::Empirical,
        independent,
        uncorrelated,
        concordance_balanced,
        comonotone,
        completely_separated: SeparationDecision {
            decision: separated,
            structure,
        },
        notes,
    })
}
