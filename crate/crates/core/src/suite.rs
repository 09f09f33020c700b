//! Seeded family of random models for checking identities beyond the catalog.
//!
//! Most models are generic: 2 to 5 predictor atoms in one or two
//! dimensions, each with a conditional law of 1 to 3 uniform pieces on a
//! quarter-integer lattice, sometimes with an extra response atom. Every
//! tenth model of each structured kind has a known answer: independence,
//! perfect dependence, complete separation, a mean-preserving symmetric
//! spread, and a continuous predictor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{example_model, ExampleId};
use crate::law::{Atom, MixedLaw1D, Piece};
use crate::model::{
    Affine, Component, ConditionalFamily, DistributionModel, MarginalX, ModelOptions, XPiece,
};

/// Seed of the suite.
pub const SUITE_SEED: u64 = 0x5eed_2024;
/// Number of random models.
pub const SUITE_SIZE: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteKind {
    Generic,
    Independent,
    PerfectDependence,
    Separated,
    SymmetricSpread,
    ContinuousPredictor,
}

impl SuiteKind {
    fn of(index: usize) -> Self {
        match index % 10 {
            0 => SuiteKind::Independent,
            1 => SuiteKind::PerfectDependence,
            2 => SuiteKind::Separated,
            3 => SuiteKind::SymmetricSpread,
            4 => SuiteKind::ContinuousPredictor,
            _ => SuiteKind::Generic,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteModel {
    pub name: String,
    pub kind: SuiteKind,
    pub model: DistributionModel,
}

fn lattice(rng: &mut ChaCha8Rng, lo: i32, hi: i32) -> f64 {
    rng.random_range(lo..=hi) as f64 * 0.25
}

fn weights(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(1..=8) as f64).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

fn random_piece(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let a = lattice(rng, -8, 7);
    let len = rng.random_range(1..=6) as f64 * 0.25;
    (a, a + len)
}

/// 1 to 3 pieces on the lattice, plus a response atom with probability 0.3.
fn random_law(rng: &mut ChaCha8Rng) -> MixedLaw1D {
    let k = rng.random_range(1..=3);
    let with_atom = rng.random_bool(0.3);
    let w = weights(rng, k + with_atom as usize);
    let pieces = (0..k)
        .map(|i| {
            let (lower, upper) = random_piece(rng);
            Piece {
                lower,
                upper,
                mass: w[i],
            }
        })
        .collect();
    let atoms = if with_atom {
        vec![Atom {
            location: lattice(rng, -8, 8),
            mass: w[k],
        }]
    } else {
        vec![]
    };
    MixedLaw1D::new(atoms, pieces).expect("lattice law")
}

fn random_points(rng: &mut ChaCha8Rng, k: usize, p: usize) -> Vec<Vec<f64>> {
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(k);
    while points.len() < k {
        let x: Vec<f64> = (0..p).map(|_| rng.random_range(-3..=3) as f64).collect();
        if !points.contains(&x) {
            points.push(x);
        }
    }
    points
}

fn discrete_model(rng: &mut ChaCha8Rng, kind: SuiteKind) -> DistributionModel {
    let k = rng.random_range(2..=5);
    let p = rng.random_range(1..=2);
    let points = random_points(rng, k, p);
    let masses = weights(rng, k);
    let laws: Vec<MixedLaw1D> = match kind {
        SuiteKind::Independent => vec![random_law(rng); k],
        SuiteKind::PerfectDependence => {
            let mut locs: Vec<f64> = Vec::new();
            while locs.len() < k {
                let y = lattice(rng, -8, 8);
                if !locs.contains(&y) {
                    locs.push(y);
                }
            }
            locs.into_iter().map(MixedLaw1D::point).collect()
        }
        SuiteKind::Separated => {
            // consecutive disjoint supports in a random order
            let mut order: Vec<usize> = (0..k).collect();
            for i in (1..k).rev() {
                order.swap(i, rng.random_range(0..=i));
            }
            order
                .into_iter()
                .map(|slot| {
                    let base = slot as f64 * 2.0;
                    let shift = lattice(rng, 0, 3);
                    MixedLaw1D::uniform(base + shift, base + shift + 1.0).expect("unit piece")
                })
                .collect()
        }
        SuiteKind::SymmetricSpread => (0..k)
            .map(|_| {
                // symmetric about 0: same mean, pairwise relative effects 1/2
                let (a, b) = (lattice(rng, 0, 4), lattice(rng, 1, 4));
                if a == 0.0 {
                    MixedLaw1D::uniform(-b, b).expect("centred piece")
                } else {
                    let pieces = vec![
                        Piece {
                            lower: -a - b,
                            upper: -a,
                            mass: 0.5,
                        },
                        Piece {
                            lower: a,
                            upper: a + b,
                            mass: 0.5,
                        },
                    ];
                    MixedLaw1D::new(vec![], pieces).expect("symmetric pair")
                }
            })
            .collect(),
        _ => (0..k).map(|_| random_law(rng)).collect(),
    };
    DistributionModel::discrete(
        points
            .into_iter()
            .zip(masses)
            .zip(laws)
            .map(|((x, m), l)| (x, m, l))
            .collect(),
    )
    .expect("suite model")
}

fn continuous_model(rng: &mut ChaCha8Rng) -> DistributionModel {
    let pieces = rng.random_range(1..=2);
    let mut marginal = MarginalX::default();
    let mut conditional = ConditionalFamily::default();
    let masses = weights(rng, pieces + 1);
    for (i, &mass) in masses[..pieces].iter().enumerate() {
        let lower = i as f64 * 2.0;
        marginal.pieces.push(XPiece {
            lower,
            upper: lower + 1.0,
            mass,
        });
        let comps = rng.random_range(1..=3);
        let w = weights(rng, comps);
        conditional.piece_components.push(
            w.into_iter()
                .map(|weight| {
                    if rng.random_bool(0.5) {
                        let alpha = lattice(rng, -4, 4);
                        let beta = lattice(rng, -4, 4);
                        Component::point(weight, Affine { alpha, beta })
                    } else {
                        let (lo, hi) = random_piece(rng);
                        Component::uniform(weight, lo, hi)
                    }
                })
                .collect(),
        );
    }
    marginal.atoms.push(crate::model::XAtom {
        point: vec![-1.0],
        mass: masses[pieces],
    });
    conditional.atom_laws.push(random_law(rng));
    DistributionModel::new(1, marginal, conditional, ModelOptions::default())
        .expect("continuous suite model")
}

/// The random models, in a fixed order.
pub fn random_suite() -> Vec<SuiteModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    (0..SUITE_SIZE)
        .map(|i| {
            let kind = SuiteKind::of(i);
            let model = match kind {
                SuiteKind::ContinuousPredictor => continuous_model(&mut rng),
                _ => discrete_model(&mut rng, kind),
            };
            SuiteModel {
                name: format!("random_{i:02}"),
                kind,
                model,
            }
        })
        .collect()
}

/// Catalog models followed by the random suite.
pub fn verification_models() -> Vec<(String, DistributionModel)> {
    ExampleId::ALL
        .iter()
        .map(|&id| (id.as_str().to_string(), example_model(id)))
        .chain(random_suite().into_iter().map(|s| (s.name, s.model)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_is_deterministic_and_sized() {
        let a = random_suite();
        let b = random_suite();
        assert_eq!(a.len(), SUITE_SIZE);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.model, y.model);
        }
        for s in &a {
            let atoms = s.model.marginal().atoms.len();
            if s.kind != SuiteKind::ContinuousPredictor {
                assert!((2..=5).contains(&atoms), "{}", s.name);
            }
            for law in &s.model.conditional().atom_laws {
                assert!(law.pieces().len() <= 3);
            }
        }
        assert_eq!(
            verification_models().len(),
            ExampleId::ALL.len() + SUITE_SIZE
        );
    }
}
