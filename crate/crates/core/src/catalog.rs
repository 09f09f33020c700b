//! Built-in example distributions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::law::{Atom, MixedLaw1D, Piece};
use crate::model::{
    Affine, Component, ConditionalFamily, DistributionModel, MarginalX, ModelOptions, XAtom, XPiece,
};

/// Number of retained atoms of the geometric family `ex3_5`.
pub const EX3_5_ATOMS: usize = 40;

/// Number of X-pieces approximating the squared response of `ex2_6_sq`.
pub const SQUARE_PIECES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExampleId {
    #[serde(rename = "ex2_4")]
    Ex2_4,
    #[serde(rename = "ex2_5")]
    Ex2_5,
    #[serde(rename = "ex2_6")]
    Ex2_6,
    #[serde(rename = "ex2_6_sq")]
    Ex2_6Sq,
    #[serde(rename = "ex3_3")]
    Ex3_3,
    #[serde(rename = "ex3_4")]
    Ex3_4,
    #[serde(rename = "ex3_5")]
    Ex3_5,
}

impl ExampleId {
    pub const ALL: [ExampleId; 7] = [
        ExampleId::Ex2_4,
        ExampleId::Ex2_5,
        ExampleId::Ex2_6,
        ExampleId::Ex2_6Sq,
        ExampleId::Ex3_3,
        ExampleId::Ex3_4,
        ExampleId::Ex3_5,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExampleId::Ex2_4 => "ex2_4",
            ExampleId::Ex2_5 => "ex2_5",
            ExampleId::Ex2_6 => "ex2_6",
            ExampleId::Ex2_6Sq => "ex2_6_sq",
            ExampleId::Ex3_3 => "ex3_3",
            ExampleId::Ex3_4 => "ex3_4",
            ExampleId::Ex3_5 => "ex3_5",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ExampleId::Ex2_4 => {
                "X in {-1, 1} with masses 4/7, 3/7; Y|X=-1 uniform on [-1.5,-0.5] and [0.5,1.5], Y|X=1 ~ U[-0.5,0.5]. \
                 Dependent, but uncorrelated Markov product and balanced concordance."
            }
            ExampleId::Ex2_5 => {
                "X in {0, 1} with masses 1/3, 2/3; Y|X=0 ~ U[-0.5,0.5], Y|X=1 mixes U[-1.5,-0.5] (2/3) and U[1,3] (1/3). \
                 Zero explainability without stochastic comparability."
            }
            ExampleId::Ex2_6 => "X ~ U[0,1], Y = 1/2 + Z X / 2 with Z = ±1 equally likely. Cross-shaped Markov product.",
            ExampleId::Ex2_6Sq => {
                "Response Y^2 of ex2_6, each branch approximated by 64 linear pieces on a grid refined towards x = 1. \
                 Stochastically comparable but explainable (R^2 = 1/16)."
            }
            ExampleId::Ex3_3 => {
                "X in {-1, 1} with masses 1/3, 2/3; Y|X=-1 ~ U[-1,0], Y|X=1 is 1 or U[1,3] with probability 1/2 each. \
                 Completely separated, not perfectly dependent."
            }
            ExampleId::Ex3_4 => {
                "X ~ U([-1,0] u [1,3]), Y = 3 * 1{X >= 1} - 1. Perfectly dependent, not completely separated."
            }
            ExampleId::Ex3_5 => {
                "P(X = n) = 2^-n, Y|X=n ~ U(2 - 2^(3-n), 2 - 2^(2-n)), truncated to the first 40 atoms. \
                 Completely separated with an ordinal sum of (countably) many blocks."
            }
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExampleId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

fn uniform(lower: f64, upper: f64) -> MixedLaw1D {
    MixedLaw1D::uniform(lower, upper).expect("catalog interval")
}

fn pieces(list: &[(f64, f64, f64)]) -> MixedLaw1D {
    let pieces = list
        .iter()
        .map(|&(lower, upper, mass)| Piece { lower, upper, mass })
        .collect();
    MixedLaw1D::new(vec![], pieces).expect("catalog law")
}

fn discrete(atoms: Vec<(f64, f64, MixedLaw1D)>, options: ModelOptions) -> DistributionModel {
    let mut marginal = MarginalX::default();
    let mut conditional = ConditionalFamily::default();
    for (x, mass, law) in atoms {
        marginal.atoms.push(XAtom {
            point: vec![x],
            mass,
        });
        conditional.atom_laws.push(law);
    }
    DistributionModel::new(1, marginal, conditional, options).expect("catalog model")
}

/// The exact catalog model for `id`.
pub fn example_model(id: ExampleId) -> DistributionModel {
    let plain = ModelOptions::default;
    match id {
        ExampleId::Ex2_4 => discrete(
            vec![
                (
                    -1.0,
                    4.0 / 7.0,
                    pieces(&[(-1.5, -0.5, 0.5), (0.5, 1.5, 0.5)]),
                ),
                (1.0, 3.0 / 7.0, uniform(-0.5, 0.5)),
            ],
            plain(),
        ),
        ExampleId::Ex2_5 => discrete(
            vec![
                (0.0, 1.0 / 3.0, uniform(-0.5, 0.5)),
                (
                    1.0,
                    2.0 / 3.0,
                    pieces(&[(-1.5, -0.5, 2.0 / 3.0), (1.0, 3.0, 1.0 / 3.0)]),
                ),
            ],
            plain(),
        ),
        ExampleId::Ex2_6 => {
            let comps = vec![
                Component::point(
                    0.5,
                    Affine {
                        alpha: 0.5,
                        beta: -0.5,
                    },
                ),
                Component::point(
                    0.5,
                    Affine {
                        alpha: 0.5,
                        beta: 0.5,
                    },
                ),
            ];
            continuous(vec![(0.0, 1.0, comps)], plain())
        }
        ExampleId::Ex2_6Sq => squared_cross(),
        ExampleId::Ex3_3 => {
            let upper = MixedLaw1D::new(
                vec![Atom {
                    location: 1.0,
                    mass: 0.5,
                }],
                vec![Piece {
                    lower: 1.0,
                    upper: 3.0,
                    mass: 0.5,
                }],
            )
            .expect("catalog law");
            discrete(
                vec![
                    (-1.0, 1.0 / 3.0, uniform(-1.0, 0.0)),
                    (1.0, 2.0 / 3.0, upper),
                ],
                plain(),
            )
        }
        ExampleId::Ex3_4 => continuous(
            vec![
                (
                    -1.0,
                    0.0,
                    vec![Component::point(1.0, Affine::constant(-1.0))],
                ),
                (1.0, 3.0, vec![Component::point(1.0, Affine::constant(2.0))]),
            ],
            plain(),
        ),
        ExampleId::Ex3_5 => {
            let atoms = (1..=EX3_5_ATOMS as i32)
                .map(|n| {
                    let law = uniform(2.0 - 2f64.powi(3 - n), 2.0 - 2f64.powi(2 - n));
                    (n as f64, 2f64.powi(-n), law)
                })
                .collect();
            let note = format!(
                "countable family truncated to n <= {EX3_5_ATOMS}; retained masses renormalized"
            );
            discrete(
                atoms,
                ModelOptions {
                    truncated: true,
                    notes: vec![note],
                },
            )
        }
    }
}

/// Pieces `[lower, upper]` with mass proportional to length and their components.
fn continuous(parts: Vec<(f64, f64, Vec<Component>)>, options: ModelOptions) -> DistributionModel {
    let total: f64 = parts.iter().map(|(a, b, _)| b - a).sum();
    let mut marginal = MarginalX::default();
    let mut conditional = ConditionalFamily::default();
    for (lower, upper, comps) in parts {
        marginal.pieces.push(XPiece {
            lower,
            upper,
            mass: (upper - lower) / total,
        });
        conditional.piece_components.push(comps);
    }
    DistributionModel::new(1, marginal, conditional, options).expect("catalog model")
}

/// `(X, Y^2)` for the cross of `ex2_6`: each branch `(1/2 ± x/2)^2` is replaced by
/// its chord on every cell of a grid that is finer near `x = 1`, where the
/// branches are steepest.
fn squared_cross() -> DistributionModel {
    let grid: Vec<f64> = (0..=SQUARE_PIECES)
        .map(|k| {
            let t = 1.0 - k as f64 / SQUARE_PIECES as f64;
            1.0 - t * t
        })
        .collect();
    let lo = |x: f64| (0.5 - 0.5 * x).powi(2);
    let hi = |x: f64| (0.5 + 0.5 * x).powi(2);
    let chord = |f: &dyn Fn(f64) -> f64, a: f64, b: f64| {
        let beta = (f(b) - f(a)) / (b - a);
        Affine {
            alpha: f(a) - beta * a,
            beta,
        }
    };
    let parts = grid
        .windows(2)
        .map(|w| {
            let comps = vec![
                Component::point(0.5, chord(&lo, w[0], w[1])),
                Component::point(0.5, chord(&hi, w[0], w[1])),
            ];
            (w[0], w[1], comps)
        })
        .collect();
    let note = format!(
        "Y^2 branches replaced by chords on {SQUARE_PIECES} cells; sup-distance of the Y marginal CDF from sqrt(y) is below 1e-4"
    );
    continuous(
        parts,
        ModelOptions {
            truncated: false,
            notes: vec![note],
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in ExampleId::ALL {
            assert_eq!(id.as_str().parse::<ExampleId>().unwrap(), id);
        }
        assert!(matches!(
            "ex9_9".parse::<ExampleId>(),
            Err(Error::UnknownExample(_))
        ));
    }

    #[test]
    fn every_example_validates() {
        for id in ExampleId::ALL {
            let m = example_model(id);
            let y = m.marginal_law_y();
            assert!((y.total_mass() - 1.0).abs() < 1e-12, "{id}");
        }
    }

    #[test]
    fn squared_marginal_close_to_sqrt() {
        let y = example_model(ExampleId::Ex2_6Sq).marginal_law_y();
        let worst = (0..=100_000)
            .map(|k| {
                let t = k as f64 / 100_000.0;
                (y.cdf(t) - t.sqrt()).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst < 1e-4, "sup error {worst}");
    }

    #[test]
    fn geometric_family_layout() {
        let m = example_model(ExampleId::Ex3_5);
        let law = m.conditional_law(&[1.0]).unwrap();
        assert_eq!(law.support(), (-2.0, 0.0));
        let law = m.conditional_law(&[3.0]).unwrap();
        assert_eq!(law.support(), (1.0, 1.5));
    }
}
