//! Exact values of ξ, R² and Λ, each by two routes: the defining integrals
//! and the Markov-product representations.
//!
//! All integrands are polynomial between breakpoints that are known in
//! closed form, so the Gauss–Legendre rules of [`crate::quad`] on aligned
//! cells are exact up to rounding.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::law::{Bound, Kernel, MixedLaw1D};
use crate::markov::markov_cdf_bounds;
use crate::model::{Affine, Component, DistributionModel, XPiece};
use crate::quad::{cell_breaks, gauss, integrate_2d, integrate_cells};

/// Range slack for exact values.
pub const EXACT_RANGE_EPS: f64 = 1e-9;

const DEGENERATE_EPS: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasurePath {
    Definition,
    Markov,
    Estimator,
}

impl std::fmt::Display for MeasurePath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MeasurePath::Definition => "definition",
            MeasurePath::Markov => "markov",
            MeasurePath::Estimator => "estimator",
        })
    }
}

/// Values of the three measures obtained along one computation path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub xi: Option<f64>,
    pub r2: Option<f64>,
    pub lambda: Option<f64>,
    pub path: MeasurePath,
    pub notes: Vec<String>,
}

impl MeasureReport {
    pub fn empty(path: MeasurePath) -> Self {
        MeasureReport {
            xi: None,
            r2: None,
            lambda: None,
            path,
            notes: Vec::new(),
        }
    }

    fn model_notes(model: &DistributionModel, path: MeasurePath) -> Self {
        let mut r = MeasureReport::empty(path);
        if model.truncation_tail_mass() > 0.0 {
            r.notes.push(format!(
                "truncated family, discarded tail mass {:e}",
                model.truncation_tail_mass()
            ));
        }
        r
    }
}

fn guard_response(marginal: &MixedLaw1D) -> Result<()> {
    if marginal.is_degenerate() || marginal.variance() <= DEGENERATE_EPS {
        return Err(Error::Degenerate("Y is almost surely constant".into()));
    }
    Ok(())
}

fn guard_predictor(model: &DistributionModel) -> Result<f64> {
    let collision = model.collision_probability();
    if 1.0 - collision <= DEGENERATE_EPS {
        return Err(Error::Degenerate("X is almost surely constant".into()));
    }
    Ok(collision)
}

// ---------------------------------------------------------------------------
// relative effect

/// `P(Z1 < Z2) + P(Z1 = Z2) / 2` for two kernels, integrating the CDF of `Z1` against `Z2`.
fn psi_kernels(k1: Kernel, k2: Kernel) -> f64 {
    match (k1, k2) {
        (Kernel::Point(a), Kernel::Point(b)) => {
            if a < b {
                1.0
            } else if a == b {
                0.5
            } else {
                0.0
            }
        }
        (_, Kernel::Uniform { lower, upper }) => {
            (k1.cdf_antiderivative(upper) - k1.cdf_antiderivative(lower)) / (upper - lower)
        }
        (Kernel::Uniform { .. }, Kernel::Point(b)) => k1.cdf(b),
    }
}

/// Relative effect `Ψ(P1, P2) = P(Z1 < Z2) + P(Z1 = Z2) / 2` with `Z1 ~ P1`, `Z2 ~ P2` independent.
pub fn relative_effect(law1: &MixedLaw1D, law2: &MixedLaw1D) -> f64 {
    let mut s = 0.0;
    for (w1, k1) in law1.kernels() {
        for (w2, k2) in law2.kernels() {
            s += w1 * w2 * psi_kernels(k1, k2);
        }
    }
    s
}

/// `(P(Z1 > Z2), P(Z1 < Z2))`, integrating the CDF of `Z2` against `Z1`.
fn order_kernels(k1: Kernel, k2: Kernel) -> (f64, f64) {
    match (k1, k2) {
        (Kernel::Point(a), Kernel::Point(b)) => ((a > b) as u8 as f64, (a < b) as u8 as f64),
        (Kernel::Uniform { lower, upper }, _) => {
            let below =
                (k2.cdf_antiderivative(upper) - k2.cdf_antiderivative(lower)) / (upper - lower);
            (below, 1.0 - below)
        }
        (Kernel::Point(a), Kernel::Uniform { .. }) => {
            let below = k2.cdf(a);
            (below, 1.0 - below)
        }
    }
}

type KernelList = [(f64, Kernel)];

/// `(2Ψ − 1)²` between two conditional laws.
fn separation_definition(l1: &KernelList, l2: &KernelList) -> f64 {
    let mut psi = 0.0;
    for &(w1, k1) in l1 {
        for &(w2, k2) in l2 {
            psi += w1 * w2 * psi_kernels(k1, k2);
        }
    }
    let s = 2.0 * psi - 1.0;
    s * s
}

/// Concordance minus discordance of two Markov pairs given their predictors.
fn separation_markov(l1: &KernelList, l2: &KernelList) -> f64 {
    let (mut q, mut r) = (0.0, 0.0);
    for &(w1, k1) in l1 {
        for &(w2, k2) in l2 {
            let (greater, less) = order_kernels(k1, k2);
            q += w1 * w2 * greater;
            r += w1 * w2 * less;
        }
    }
    (q * q + r * r) - 2.0 * q * r
}

fn fill_law(buf: &mut Vec<(f64, Kernel)>, comps: &[Component], x: f64) {
    buf.clear();
    buf.extend(comps.iter().map(|c| (c.weight, c.kernel(x))));
}

/// Mass, kernels and breakpoints of one predictor atom.
type AtomTerm = (f64, Vec<(f64, Kernel)>, Vec<f64>);

/// `∫∫ f(P^{Y|X=x1}, P^{Y|X=x2}) dP^X(x1) dP^X(x2)` for a symmetric `f`.
fn pair_integral<F>(model: &DistributionModel, f: F) -> f64
where
    F: Fn(&KernelList, &KernelList) -> f64 + Sync,
{
    let atoms: Vec<AtomTerm> = model
        .atom_parts()
        .map(|(a, law)| (a.mass, law.kernels().collect(), law.breakpoints()))
        .collect();
    let pieces: Vec<(&XPiece, &[Component])> = model.piece_parts().collect();

    let mut total = 0.0;
    for (m1, l1, _) in &atoms {
        for (m2, l2, _) in &atoms {
            total += m1 * m2 * f(l1, l2);
        }
    }

    let mixed: Vec<f64> = atoms
        .par_iter()
        .map(|(m, law, breaks)| {
            let mut s = 0.0;
            let mut buf = Vec::new();
            for (piece, comps) in &pieces {
                let cuts = comps
                    .iter()
                    .filter(|c| c.is_point() && c.lower.beta != 0.0)
                    .flat_map(|c| {
                        breaks
                            .iter()
                            .map(move |v| (v - c.lower.alpha) / c.lower.beta)
                    });
                let cells = cell_breaks(piece.lower, piece.upper, cuts);
                let avg = integrate_cells(&cells, |x| {
                    fill_law(&mut buf, comps, x);
                    f(law, &buf)
                }) / (piece.upper - piece.lower);
                s += piece.mass * avg;
            }
            2.0 * m * s
        })
        .collect();
    total += mixed.iter().sum::<f64>();

    let pairs: Vec<(usize, usize)> = (0..pieces.len())
        .flat_map(|i| (i..pieces.len()).map(move |j| (i, j)))
        .collect();
    let cont: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (p1, c1) = pieces[i];
            let (p2, c2) = pieces[j];
            let (outer, lines) = crossing_geometry(c1, c2);
            let (mut b1, mut b2) = (Vec::new(), Vec::new());
            let v = integrate_2d(
                (p1.lower, p1.upper),
                (p2.lower, p2.upper),
                &outer,
                &lines,
                |x1, x2| {
                    fill_law(&mut b1, c1, x1);
                    fill_law(&mut b2, c2, x2);
                    f(&b1, &b2)
                },
            );
            let avg = v / ((p1.upper - p1.lower) * (p2.upper - p2.lower));
            let factor = if i == j { 1.0 } else { 2.0 };
            factor * p1.mass * p2.mass * avg
        })
        .collect();
    total + cont.iter().sum::<f64>()
}

/// Lines in the `(x1, x2)` plane where an event of one component meets an
/// event of the other: `x2 = g(x1)`, or vertical lines `x1 = t`.
fn crossing_geometry(c1: &[Component], c2: &[Component]) -> (Vec<f64>, Vec<Affine>) {
    let mut outer = Vec::new();
    let mut lines = Vec::new();
    for e1 in c1.iter().flat_map(|c| c.events()) {
        for e2 in c2.iter().flat_map(|c| c.events()) {
            if e2.beta != 0.0 {
                lines.push(Affine {
                    alpha: (e1.alpha - e2.alpha) / e2.beta,
                    beta: e1.beta / e2.beta,
                });
            } else if e1.beta != 0.0 {
                outer.push((e2.alpha - e1.alpha) / e1.beta);
            }
        }
    }
    lines.sort_by(|a, b| a.alpha.total_cmp(&b.alpha).then(a.beta.total_cmp(&b.beta)));
    lines.dedup();
    (outer, lines)
}

fn lambda_route(model: &DistributionModel, path: MeasurePath) -> Result<MeasureReport> {
    guard_response(&model.marginal_law_y())?;
    let collision = guard_predictor(model)?;
    let integral = match path {
        MeasurePath::Markov => pair_integral(model, separation_markov),
        _ => pair_integral(model, separation_definition),
    };
    let mut report = MeasureReport::model_notes(model, path);
    report.lambda = Some(integral / (1.0 - collision));
    Ok(report)
}

/// Λ from the mean squared relative-effect deviation over pairs of predictor values.
pub fn lambda_exact(model: &DistributionModel) -> Result<MeasureReport> {
    lambda_route(model, MeasurePath::Definition)
}

/// Λ from concordance and discordance of two independent Markov pairs.
pub fn lambda_via_markov(model: &DistributionModel) -> Result<MeasureReport> {
    lambda_route(model, MeasurePath::Markov)
}

/// `P(concordant) − P(discordant)` for two independent copies of the Markov product.
pub fn concordance_difference(model: &DistributionModel) -> f64 {
    pair_integral(model, separation_markov)
}

// ---------------------------------------------------------------------------
// ξ

/// Breakpoints in `y` of every conditional CDF averaged over `X`.
pub(crate) fn response_breaks(model: &DistributionModel, marginal: &MixedLaw1D) -> Vec<f64> {
    let mut out = marginal.breakpoints();
    for (piece, comps) in model.piece_parts() {
        let points: Vec<Affine> = comps
            .iter()
            .filter(|c| c.is_point())
            .map(|c| c.lower)
            .collect();
        for (i, c) in points.iter().enumerate() {
            for d in &points[i + 1..] {
                if c.beta != d.beta {
                    let x = (d.alpha - c.alpha) / (c.beta - d.beta);
                    if x > piece.lower && x < piece.upper {
                        out.push(c.eval(x));
                    }
                }
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// `∫ g dP^Y` with `g` polynomial between consecutive `breaks`.
fn integrate_marginal<F: FnMut(f64) -> f64>(
    marginal: &MixedLaw1D,
    breaks: &[f64],
    mut g: F,
) -> f64 {
    let mut s: f64 = marginal
        .atoms()
        .iter()
        .map(|a| a.mass * g(a.location))
        .sum();
    for piece in marginal.pieces() {
        let cells = cell_breaks(piece.lower, piece.upper, breaks.iter().copied());
        s += piece.mass / (piece.upper - piece.lower) * integrate_cells(&cells, &mut g);
    }
    s
}

/// `E[P(Y >= y | X)²]`.
fn mean_square_survival(model: &DistributionModel, y: f64) -> f64 {
    let mut s = 0.0;
    for (atom, law) in model.atom_parts() {
        let v = law.survival(y);
        s += atom.mass * v * v;
    }
    for (piece, comps) in model.piece_parts() {
        let cuts = comps
            .iter()
            .filter(|c| c.is_point() && c.lower.beta != 0.0)
            .map(|c| (y - c.lower.alpha) / c.lower.beta);
        let cells = cell_breaks(piece.lower, piece.upper, cuts);
        let v = integrate_cells(&cells, |x| {
            let sv: f64 = comps
                .iter()
                .map(|c| c.weight * c.kernel(x).survival(y))
                .sum();
            sv * sv
        });
        s += piece.mass * v / (piece.upper - piece.lower);
    }
    s
}

/// ξ from the integrated conditional variance of `P(Y >= y | X)`.
pub fn xi_exact(model: &DistributionModel) -> Result<MeasureReport> {
    let marginal = model.marginal_law_y();
    guard_response(&marginal)?;
    let breaks = response_breaks(model, &marginal);
    let num = integrate_marginal(&marginal, &breaks, |y| {
        let g = marginal.survival(y);
        mean_square_survival(model, y) - g * g
    });
    let den = integrate_marginal(&marginal, &breaks, |y| {
        let g = marginal.survival(y);
        g * (1.0 - g)
    });
    if den <= DEGENERATE_EPS {
        return Err(Error::Degenerate("Y is almost surely constant".into()));
    }
    let mut report = MeasureReport::model_notes(model, MeasurePath::Definition);
    report.xi = Some(num / den);
    Ok(report)
}

/// ξ as `a ∫ P(Y < y, Y' < y) dP^Y(y) − b`.
pub fn xi_via_markov(model: &DistributionModel) -> Result<MeasureReport> {
    let marginal = model.marginal_law_y();
    guard_response(&marginal)?;
    let breaks = response_breaks(model, &marginal);
    let var_sum = integrate_marginal(&marginal, &breaks, |y| {
        let f = marginal.cdf_left(y);
        f * (1.0 - f)
    });
    if var_sum <= DEGENERATE_EPS {
        return Err(Error::Degenerate("Y is almost surely constant".into()));
    }
    let a = 1.0 / var_sum;
    let b = a * integrate_marginal(&marginal, &breaks, |y| marginal.cdf_left(y).powi(2));
    let joint = integrate_marginal(&marginal, &breaks, |y| {
        markov_cdf_bounds(model, Bound::lt(y), Bound::lt(y))
    });
    let mut report = MeasureReport::model_notes(model, MeasurePath::Markov);
    report.xi = Some(a * joint - b);
    Ok(report)
}

// ---------------------------------------------------------------------------
// R²

/// Conditional mean on a piece: `m(x) = Σ w_c mean_c(x)`, affine in `x`.
fn piece_mean(comps: &[Component], x: f64) -> f64 {
    comps.iter().map(|c| c.weight * c.kernel(x).mean()).sum()
}

fn piece_average<F: FnMut(f64) -> f64>(piece: &XPiece, f: F) -> f64 {
    gauss(piece.lower, piece.upper, f) / (piece.upper - piece.lower)
}

/// R² as the variance of the conditional mean over the variance of `Y`.
pub fn r2_exact(model: &DistributionModel) -> Result<MeasureReport> {
    let marginal = model.marginal_law_y();
    guard_response(&marginal)?;
    let mu = marginal.mean();
    let var = marginal.variance();
    let mut explained = 0.0;
    for (atom, law) in model.atom_parts() {
        let d = law.mean() - mu;
        explained += atom.mass * d * d;
    }
    for (piece, comps) in model.piece_parts() {
        explained += piece.mass
            * piece_average(piece, |x| {
                let d = piece_mean(comps, x) - mu;
                d * d
            });
    }
    let mut report = MeasureReport::model_notes(model, MeasurePath::Definition);
    report.r2 = Some(explained / var);
    Ok(report)
}

/// R² as the Pearson correlation of `Y` and `Y'`.
pub fn r2_via_markov(model: &DistributionModel) -> Result<MeasureReport> {
    guard_response(&model.marginal_law_y())?;
    let (mut mean, mut cross, mut square) = (0.0, 0.0, 0.0);
    for (atom, law) in model.atom_parts() {
        let m = law.mean();
        mean += atom.mass * m;
        cross += atom.mass * m * m;
        square += atom.mass * law.second_moment();
    }
    for (piece, comps) in model.piece_parts() {
        mean += piece.mass * piece_average(piece, |x| piece_mean(comps, x));
        cross += piece.mass * piece_average(piece, |x| piece_mean(comps, x).powi(2));
        square += piece.mass
            * piece_average(piece, |x| {
                comps
                    .iter()
                    .map(|c| c.weight * c.kernel(x).second_moment())
                    .sum()
            });
    }
    let var = square - mean * mean;
    if var <= DEGENERATE_EPS {
        return Err(Error::Degenerate("Y is almost surely constant".into()));
    }
    let mut report = MeasureReport::model_notes(model, MeasurePath::Markov);
    report.r2 = Some((cross - mean * mean) / var);
    Ok(report)
}

// ---------------------------------------------------------------------------
// combined

/// All three measures along one exact path. A degenerate predictor leaves Λ
/// absent with a note; a degenerate response is an error.
pub fn exact_report(model: &DistributionModel, path: MeasurePath) -> Result<MeasureReport> {
    let (xi, r2, lambda) = match path {
        MeasurePath::Definition => (xi_exact(model)?, r2_exact(model)?, lambda_exact(model)),
        MeasurePath::Markov => (
            xi_via_markov(model)?,
            r2_via_markov(model)?,
            lambda_via_markov(model),
        ),
        MeasurePath::Estimator => {
            return Err(Error::Domain(
                "the estimator path needs data, not a model".into(),
            ));
        }
    };
    let mut report = MeasureReport::model_notes(model, path);
    report.xi = xi.xi;
    report.r2 = r2.r2;
    match lambda {
        Ok(l) => report.lambda = l.lambda,
        Err(Error::Degenerate(msg)) => report.notes.push(format!("lambda undefined: {msg}")),
        Err(e) => return Err(e),
    }
    for v in [report.xi, report.r2, report.lambda].into_iter().flatten() {
        if !(-EXACT_RANGE_EPS..=1.0 + EXACT_RANGE_EPS).contains(&v) {
            report.notes.push(format!("value {v} outside [0, 1]"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{example_model, ExampleId};
    use crate::law::{Atom, Piece};
    use crate::model::{ConditionalFamily, MarginalX, ModelOptions};

    fn u(a: f64, b: f64) -> MixedLaw1D {
        MixedLaw1D::uniform(a, b).unwrap()
    }

    fn independent() -> DistributionModel {
        DistributionModel::discrete(vec![
            (vec![0.0], 0.5, u(0.0, 1.0)),
            (vec![1.0], 0.5, u(0.0, 1.0)),
        ])
        .unwrap()
    }

    #[test]
    fn relative_effect_examples() {
        assert_eq!(relative_effect(&u(0.0, 1.0), &u(0.0, 1.0)), 0.5);
        let m = example_model(ExampleId::Ex2_4);
        let (a, b) = (
            m.conditional_law(&[-1.0]).unwrap(),
            m.conditional_law(&[1.0]).unwrap(),
        );
        assert!((relative_effect(&a, &b) - 0.5).abs() < 1e-15);
        let m = example_model(ExampleId::Ex2_5);
        let (a, b) = (
            m.conditional_law(&[0.0]).unwrap(),
            m.conditional_law(&[1.0]).unwrap(),
        );
        assert!((relative_effect(&a, &b) - 1.0 / 3.0).abs() < 1e-15);
        let p = MixedLaw1D::point(1.0);
        let mixed = MixedLaw1D::new(
            vec![Atom {
                location: 1.0,
                mass: 0.5,
            }],
            vec![Piece {
                lower: 0.0,
                upper: 2.0,
                mass: 0.5,
            }],
        )
        .unwrap();
        // P(1 < Z) + 0.5 P(Z = 1) = 0.25 + 0.25
        assert!((relative_effect(&p, &mixed) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn order_kernels_complement_psi() {
        let ks = [
            Kernel::Point(0.3),
            Kernel::Point(1.0),
            Kernel::Uniform {
                lower: 0.0,
                upper: 1.0,
            },
            Kernel::Uniform {
                lower: 0.5,
                upper: 2.0,
            },
        ];
        for &a in &ks {
            for &b in &ks {
                let (q, r) = order_kernels(a, b);
                let t = 1.0 - q - r;
                assert!(
                    (r + 0.5 * t - psi_kernels(a, b)).abs() < 1e-15,
                    "{a:?} {b:?}"
                );
            }
        }
    }

    #[test]
    fn xi_values() {
        assert!(xi_exact(&independent()).unwrap().xi.unwrap().abs() < 1e-15);
        let x = xi_exact(&example_model(ExampleId::Ex2_4))
            .unwrap()
            .xi
            .unwrap();
        assert!((x - 6.0 / 49.0).abs() < 1e-12, "{x}");
        let x = xi_via_markov(&example_model(ExampleId::Ex2_4))
            .unwrap()
            .xi
            .unwrap();
        assert!((x - 6.0 / 49.0).abs() < 1e-12, "{x}");
        let x = xi_exact(&example_model(ExampleId::Ex3_4))
            .unwrap()
            .xi
            .unwrap();
        assert!((x - 1.0).abs() < 1e-12, "{x}");
        assert!(xi_via_markov(&independent()).unwrap().xi.unwrap().abs() < 1e-15);
    }

    #[test]
    fn r2_values() {
        let r = r2_exact(&example_model(ExampleId::Ex2_6))
            .unwrap()
            .r2
            .unwrap();
        assert!(r.abs() < 1e-12);
        let r = r2_exact(&example_model(ExampleId::Ex2_6Sq))
            .unwrap()
            .r2
            .unwrap();
        assert!((r - 1.0 / 16.0).abs() < 1e-3, "{r}");
        let r = r2_exact(&example_model(ExampleId::Ex3_3))
            .unwrap()
            .r2
            .unwrap();
        assert!(r > 0.0 && r < 1.0);
        let r = r2_via_markov(&example_model(ExampleId::Ex2_4))
            .unwrap()
            .r2
            .unwrap();
        assert!(r.abs() < 1e-12);
        let r = r2_via_markov(&example_model(ExampleId::Ex3_4))
            .unwrap()
            .r2
            .unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lambda_values() {
        let l = lambda_exact(&example_model(ExampleId::Ex2_4))
            .unwrap()
            .lambda
            .unwrap();
        assert!(l.abs() < 1e-12);
        let l = lambda_exact(&example_model(ExampleId::Ex2_5))
            .unwrap()
            .lambda
            .unwrap();
        assert!((l - 1.0 / 9.0).abs() < 1e-12, "{l}");
        let l = lambda_exact(&example_model(ExampleId::Ex3_4))
            .unwrap()
            .lambda
            .unwrap();
        assert!((l - 4.0 / 9.0).abs() < 1e-12, "{l}");
        let l = lambda_via_markov(&example_model(ExampleId::Ex3_3))
            .unwrap()
            .lambda
            .unwrap();
        assert!((l - 1.0).abs() < 1e-12, "{l}");
        let l = lambda_via_markov(&example_model(ExampleId::Ex2_4))
            .unwrap()
            .lambda
            .unwrap();
        assert!(l.abs() < 1e-12);
        assert!(concordance_difference(&example_model(ExampleId::Ex2_4)).abs() < 1e-12);
    }

    #[test]
    fn cross_model_lambda_is_zero() {
        for id in [ExampleId::Ex2_6, ExampleId::Ex2_6Sq] {
            let m = example_model(id);
            assert!(
                lambda_exact(&m).unwrap().lambda.unwrap().abs() < 1e-12,
                "{id}"
            );
            assert!(
                lambda_via_markov(&m).unwrap().lambda.unwrap().abs() < 1e-12,
                "{id}"
            );
        }
    }

    #[test]
    fn continuous_lambda_against_closed_form() {
        // X ~ U[0,1], Y = X: Ψ(x1, x2) = 1{x1 < x2}, Λ = 1
        let m = DistributionModel::new(
            1,
            MarginalX {
                atoms: vec![],
                pieces: vec![XPiece {
                    lower: 0.0,
                    upper: 1.0,
                    mass: 1.0,
                }],
            },
            ConditionalFamily {
                atom_laws: vec![],
                piece_components: vec![vec![Component::point(
                    1.0,
                    Affine {
                        alpha: 0.0,
                        beta: 1.0,
                    },
                )]],
            },
            ModelOptions::default(),
        )
        .unwrap();
        assert!((lambda_exact(&m).unwrap().lambda.unwrap() - 1.0).abs() < 1e-12);
        assert!((xi_exact(&m).unwrap().xi.unwrap() - 1.0).abs() < 1e-12);
        // Y | X = x is an equal mixture of δ_x and U[0,1]:
        // 2Ψ − 1 = 1{x1 < x2}/2 + (x2 − x1)/2 − 1/4, whose mean square is 3/16
        let m = DistributionModel::new(
            1,
            MarginalX {
                atoms: vec![],
                pieces: vec![XPiece {
                    lower: 0.0,
                    upper: 1.0,
                    mass: 1.0,
                }],
            },
            ConditionalFamily {
                atom_laws: vec![],
                piece_components: vec![vec![
                    Component::point(
                        0.5,
                        Affine {
                            alpha: 0.0,
                            beta: 1.0,
                        },
                    ),
                    Component::uniform(0.5, 0.0, 1.0),
                ]],
            },
            ModelOptions::default(),
        )
        .unwrap();
        let a = lambda_exact(&m).unwrap().lambda.unwrap();
        let b = lambda_via_markov(&m).unwrap().lambda.unwrap();
        assert!((a - 3.0 / 16.0).abs() < 1e-12, "{a}");
        assert!((b - 3.0 / 16.0).abs() < 1e-12, "{b}");
    }

    #[test]
    fn degenerate_guards() {
        let constant_y = DistributionModel::discrete(vec![
            (vec![0.0], 0.5, MixedLaw1D::point(1.0)),
            (vec![1.0], 0.5, MixedLaw1D::point(1.0)),
        ])
        .unwrap();
        assert!(matches!(xi_exact(&constant_y), Err(Error::Degenerate(_))));
        assert!(matches!(
            r2_via_markov(&constant_y),
            Err(Error::Degenerate(_))
        ));
        let constant_x = DistributionModel::discrete(vec![(vec![0.0], 1.0, u(0.0, 1.0))]).unwrap();
        assert!(matches!(
            lambda_exact(&constant_x),
            Err(Error::Degenerate(_))
        ));
        let report = exact_report(&constant_x, MeasurePath::Definition).unwrap();
        assert!(report.lambda.is_none() && !report.notes.is_empty());
    }

    #[test]
    fn ex35_separated() {
        let m = example_model(ExampleId::Ex3_5);
        let l = lambda_exact(&m).unwrap().lambda.unwrap();
        assert!((l - 1.0).abs() < 1e-10, "{l}");
        let r = exact_report(&m, MeasurePath::Markov).unwrap();
        assert!(r.notes.iter().any(|n| n.contains("truncated")));
    }
}
