//! The Markov product `(Y, Y')`: `Y'` is drawn from the same conditional law
//! as `Y` given `X`, independently of `Y`.
//!
//! Its joint CDF is `H(y, y') = E[F(y | X) F(y' | X)]`. On an X-piece each
//! conditional CDF factor is either a constant (uniform component) or the
//! indicator of an x-interval (point component), so the piece contribution is
//! a finite sum of interval overlaps.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::{Dataset, MarkovDataset};
use crate::error::{Error, Result};
use crate::law::{Bound, CdfTable, Kernel, MixedLaw1D};
use crate::model::{
    Affine, Component, ConditionalFamily, DistributionModel, MarginalX, ModelOptions, XPiece,
};

/// `n` i.i.d. triples `(x, y, y')`; deterministic in `(model, n, seed)`.
pub fn sample_markov(model: &DistributionModel, n: usize, seed: u64) -> Result<MarkovDataset> {
    if n == 0 {
        return Err(Error::Count("sample size must be at least 1".into()));
    }
    let sampler = model.sampler();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = model.p();
    let mut x = Vec::with_capacity(n * p);
    let mut y = Vec::with_capacity(n);
    let mut y_prime = Vec::with_capacity(n);
    for _ in 0..n {
        let source = sampler.draw_x(&mut rng);
        x.extend_from_slice(sampler.x_value(&source));
        y.push(sampler.draw_y(&source, &mut rng));
        y_prime.push(sampler.draw_y(&source, &mut rng));
    }
    MarkovDataset::new(p, x, y, y_prime, Some(seed), false)
}

/// `H(y, y') = P(Y <= y, Y' <= y')`.
pub fn markov_cdf(model: &DistributionModel, y: f64, y_prime: f64) -> f64 {
    markov_cdf_bounds(model, Bound::le(y), Bound::le(y_prime))
}

/// `P(Y ∈ b1, Y' ∈ b2)` for half-line events; strict bounds give left limits exactly.
pub fn markov_cdf_bounds(model: &DistributionModel, b1: Bound, b2: Bound) -> f64 {
    let mut h = 0.0;
    for (atom, law) in model.atom_parts() {
        let f1 = law.cdf_at(b1);
        if f1 > 0.0 {
            h += atom.mass * f1 * law.cdf_at(b2);
        }
    }
    for (piece, comps) in model.piece_parts() {
        h += piece.mass * piece_product(piece, comps, b1, b2);
    }
    h.clamp(0.0, 1.0)
}

/// Average over the piece of `F(b1 | x) F(b2 | x)`.
fn piece_product(piece: &XPiece, comps: &[Component], b1: Bound, b2: Bound) -> f64 {
    let len = piece.upper - piece.lower;
    let first: Vec<(f64, f64, f64)> = comps.iter().map(|c| factor(c, piece, b1)).collect();
    let second: Vec<(f64, f64, f64)> = comps.iter().map(|c| factor(c, piece, b2)).collect();
    let mut s = 0.0;
    for (c, &(f1, lo1, hi1)) in comps.iter().zip(&first) {
        if f1 == 0.0 {
            continue;
        }
        for (d, &(f2, lo2, hi2)) in comps.iter().zip(&second) {
            let overlap = hi1.min(hi2) - lo1.max(lo2);
            if f2 > 0.0 && overlap > 0.0 {
                s += c.weight * d.weight * f1 * f2 * overlap;
            }
        }
    }
    s / len
}

/// `F_c(bound | x) = f · 1{x ∈ [lo, hi]}` on the piece.
fn factor(c: &Component, piece: &XPiece, bound: Bound) -> (f64, f64, f64) {
    let (a, b) = (piece.lower, piece.upper);
    if !c.is_point() {
        return (c.kernel(a).cdf_at(bound), a, b);
    }
    let Affine { alpha, beta } = c.lower;
    if beta == 0.0 {
        let f = Kernel::Point(alpha).cdf_at(bound);
        return (f, a, b);
    }
    let t = (bound.value - alpha) / beta;
    if beta > 0.0 {
        (1.0, a, b.min(t))
    } else {
        (1.0, a.max(t), b)
    }
}

/// Markov-product CDF with the response marginal tabulated, for repeated
/// evaluation on the original and the `F_Y`-transformed scale.
#[derive(Clone, Debug)]
pub struct MarkovCdf<'a> {
    model: &'a DistributionModel,
    marginal: MixedLaw1D,
    table: CdfTable,
}

impl<'a> MarkovCdf<'a> {
    pub fn new(model: &'a DistributionModel) -> Self {
        let marginal = model.marginal_law_y();
        let table = CdfTable::new(&marginal);
        MarkovCdf {
            model,
            marginal,
            table,
        }
    }

    pub fn model(&self) -> &DistributionModel {
        self.model
    }

    pub fn marginal(&self) -> &MixedLaw1D {
        &self.marginal
    }

    pub fn table(&self) -> &CdfTable {
        &self.table
    }

    pub fn at(&self, y: f64, y_prime: f64) -> f64 {
        markov_cdf(self.model, y, y_prime)
    }

    pub fn at_bounds(&self, b1: Bound, b2: Bound) -> f64 {
        markov_cdf_bounds(self.model, b1, b2)
    }

    /// `P(F_Y(Y) <= u, F_Y(Y') <= v)`.
    pub fn transformed(&self, u: f64, v: f64) -> f64 {
        markov_cdf_bounds(
            self.model,
            self.table.level_bound(u),
            self.table.level_bound(v),
        )
    }
}

/// Replaces `y` and `y'` by `F_Y(y)` and `F_Y(y')` for the model's response marginal.
pub fn transform_markov(model: &DistributionModel, data: &MarkovDataset) -> Result<MarkovDataset> {
    if data.is_transformed() {
        return Err(Error::State("Markov sample is already transformed".into()));
    }
    let table = CdfTable::new(&model.marginal_law_y());
    let y = data.y().iter().map(|&v| table.cdf(v)).collect();
    let y_prime = data.y_prime().iter().map(|&v| table.cdf(v)).collect();
    data.with_values(y, y_prime, true)
}

/// Empirical CDF of `sample`, as a closure over a sorted copy.
fn ecdf(sample: &[f64]) -> impl Fn(f64) -> f64 {
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    move |v| sorted.partition_point(|&s| s <= v) as f64 / n
}

/// Replaces `y` and `y'` by the empirical CDF of the `y` column.
pub fn empirical_transform(data: &MarkovDataset) -> Result<MarkovDataset> {
    if data.n() < 2 {
        return Err(Error::Count(
            "empirical transform needs at least 2 rows".into(),
        ));
    }
    let f = ecdf(data.y());
    let y = data.y().iter().map(|&v| f(v)).collect();
    let y_prime = data.y_prime().iter().map(|&v| f(v)).collect();
    data.with_values(y, y_prime, true)
}

/// Replaces `y` by its empirical CDF value `R_i / n`.
pub fn empirical_transform_dataset(data: &Dataset) -> Result<Dataset> {
    if data.n() < 2 {
        return Err(Error::Count(
            "empirical transform needs at least 2 rows".into(),
        ));
    }
    let f = ecdf(data.y());
    data.with_y(data.y().iter().map(|&v| f(v)).collect())
}

/// The model of `(X, F_Y(Y))`.
///
/// X-pieces are split wherever a moving point component crosses a breakpoint
/// of `F_Y`; on each sub-piece `F_Y` is affine along the component, so the
/// transformed model stays in the same family.
pub fn transform_model(model: &DistributionModel) -> Result<DistributionModel> {
    let reference = model.marginal_law_y();
    let table = CdfTable::new(&reference);
    let mut marginal = MarginalX {
        atoms: model.marginal().atoms.clone(),
        pieces: Vec::new(),
    };
    let mut conditional = ConditionalFamily {
        atom_laws: model
            .conditional()
            .atom_laws
            .iter()
            .map(|l| l.pushforward(&reference))
            .collect(),
        piece_components: Vec::new(),
    };
    for (piece, comps) in model.piece_parts() {
        let mut cuts = vec![piece.lower, piece.upper];
        for c in comps.iter().filter(|c| c.is_point() && c.lower.beta != 0.0) {
            cuts.extend(
                table
                    .breaks()
                    .iter()
                    .map(|&v| (v - c.lower.alpha) / c.lower.beta)
                    .filter(|&t| t > piece.lower && t < piece.upper),
            );
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let len = piece.upper - piece.lower;
        for w in cuts.windows(2) {
            let (s, t) = (w[0], w[1]);
            let mid = 0.5 * (s + t);
            let mut out = Vec::new();
            for c in comps {
                if c.is_point() {
                    let Affine { alpha, beta } = c.lower;
                    let map = if beta == 0.0 {
                        Affine::constant(table.cdf(alpha))
                    } else {
                        let y_mid = alpha + beta * mid;
                        let slope = table.slope(y_mid);
                        let u_mid = table.cdf(y_mid);
                        Affine {
                            alpha: u_mid + slope * (alpha - y_mid),
                            beta: slope * beta,
                        }
                    };
                    out.push(Component::point(c.weight, map));
                } else {
                    let law =
                        MixedLaw1D::from_kernels([(1.0, c.kernel(mid))]).pushforward(&reference);
                    for (m, k) in law.kernels() {
                        out.push(match k {
                            Kernel::Point(u) => Component::point(c.weight * m, Affine::constant(u)),
                            Kernel::Uniform { lower, upper } => {
                                Component::uniform(c.weight * m, lower, upper)
                            }
                        });
                    }
                }
            }
            marginal.pieces.push(XPiece {
                lower: s,
                upper: t,
                mass: piece.mass * (t - s) / len,
            });
            conditional.piece_components.push(out);
        }
    }
    let mut notes = model.notes().to_vec();
    notes.push("response replaced by F_Y(Y)".into());
    let mut out = DistributionModel::new(
        model.p(),
        marginal,
        conditional,
        ModelOptions {
            truncated: false,
            notes,
        },
    )?;
    out.set_truncation_tail_mass(model.truncation_tail_mass());
    Ok(out)
}
