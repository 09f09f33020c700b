//! JSON model files.
//!
//! ```json
//! {
//!   "p": 1,
//!   "marginal": {
//!     "atoms": [{"point": [-1], "mass": "4/7"}, {"point": [1], "mass": "3/7"}],
//!     "pieces": []
//!   },
//!   "conditional": {
//!     "atom_laws": {
//!       "0": {"atoms": [], "pieces": [{"lower": -1.5, "upper": -0.5, "mass": 0.5},
//!                                     {"lower": 0.5, "upper": 1.5, "mass": 0.5}]},
//!       "1": {"pieces": [{"lower": -0.5, "upper": 0.5, "mass": 1}]}
//!     },
//!     "continuous_components": []
//!   }
//! }
//! ```
//!
//! Numbers are JSON numbers, decimal strings or exact ratios `"p/q"`, each
//! converted to `f64` once. `continuous_components` applies to every
//! X-piece; a piece may instead carry its own `components`. A component
//! without `upper` is a point mass at `lower(x)`. `truncated: true` marks a
//! truncated countable atom family whose missing mass is recorded.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::law::{Atom, MixedLaw1D, Piece};
use crate::model::{
    Affine, Component, ConditionalFamily, DistributionModel, MarginalX, ModelOptions, XAtom,
    XPiece, RAW_MASS_TOL,
};

/// A number as written in a model file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    Text(String),
}

impl Number {
    pub fn value(&self) -> Result<f64> {
        match self {
            Number::Float(v) => Ok(*v),
            Number::Text(s) => parse_number(s),
        }
    }
}

impl From<f64> for Number {
    fn from(v: f64) -> Self {
        Number::Float(v)
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Float(v) => write!(f, "{v}"),
            Number::Text(s) => f.write_str(s),
        }
    }
}

/// Parses a decimal or a ratio `p/q`.
pub fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("`{s}` is neither a decimal nor a ratio p/q"));
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0.0 {
                return Err(Error::Parse(format!("`{s}` has a zero denominator")));
            }
            p / q
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if !v.is_finite() {
        return Err(Error::Parse(format!("`{s}` is not finite")));
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Vector(Vec<Number>),
    Scalar(Number),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawXAtom {
    pub point: PointSpec,
    pub mass: Number,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawXPiece {
    pub lower: Number,
    pub upper: Number,
    pub mass: Number,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<RawComponent>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMarginal {
    #[serde(default)]
    pub atoms: Vec<RawXAtom>,
    #[serde(default)]
    pub pieces: Vec<RawXPiece>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAtom {
    pub location: Number,
    pub mass: Number,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPiece {
    pub lower: Number,
    pub upper: Number,
    pub mass: Number,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawLaw {
    #[serde(default)]
    pub atoms: Vec<RawAtom>,
    #[serde(default)]
    pub pieces: Vec<RawPiece>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAffine {
    pub alpha: Number,
    #[serde(default = "zero")]
    pub beta: Number,
}

fn zero() -> Number {
    Number::Float(0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawComponent {
    pub weight: Number,
    pub lower: RawAffine,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<RawAffine>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConditional {
    /// Keyed by the atom's index in `marginal.atoms`.
    #[serde(default)]
    pub atom_laws: BTreeMap<String, RawLaw>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuous_components: Option<Vec<RawComponent>>,
}

/// Unvalidated model description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawModel {
    pub p: usize,
    pub marginal: RawMarginal,
    #[serde(default)]
    pub conditional: RawConditional,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub truncated: bool,
    /// Tail mass already discarded by an earlier truncation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_tail_mass: Option<Number>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn affine(raw: &RawAffine) -> Result<Affine> {
    Ok(Affine {
        alpha: raw.alpha.value()?,
        beta: raw.beta.value()?,
    })
}

fn component(raw: &RawComponent) -> Result<Component> {
    let lower = affine(&raw.lower)?;
    let upper = raw.upper.as_ref().map(affine).transpose()?.unwrap_or(lower);
    Ok(Component {
        weight: raw.weight.value()?,
        lower,
        upper,
    })
}

/// Builds a conditional law, renormalizing masses that sum to one within the raw tolerance.
fn law(raw: &RawLaw) -> Result<MixedLaw1D> {
    let mut atoms = Vec::with_capacity(raw.atoms.len());
    for a in &raw.atoms {
        atoms.push(Atom {
            location: a.location.value()?,
            mass: a.mass.value()?,
        });
    }
    let mut pieces = Vec::with_capacity(raw.pieces.len());
    for p in &raw.pieces {
        pieces.push(Piece {
            lower: p.lower.value()?,
            upper: p.upper.value()?,
            mass: p.mass.value()?,
        });
    }
    let total: f64 = atoms
        .iter()
        .map(|a| a.mass)
        .chain(pieces.iter().map(|p| p.mass))
        .sum();
    if !((total - 1.0).abs() <= RAW_MASS_TOL) {
        return Err(Error::Mass(format!(
            "conditional law masses sum to {total}, expected 1"
        )));
    }
    atoms.iter_mut().for_each(|a| a.mass /= total);
    pieces.iter_mut().for_each(|p| p.mass /= total);
    MixedLaw1D::new(atoms, pieces)
}

/// Validates and normalizes a raw description.
pub fn validate_model(raw: &RawModel) -> Result<DistributionModel> {
    let mut marginal = MarginalX::default();
    for a in &raw.marginal.atoms {
        let point = match &a.point {
            PointSpec::Vector(v) => v.iter().map(Number::value).collect::<Result<Vec<_>>>()?,
            PointSpec::Scalar(v) => vec![v.value()?],
        };
        marginal.atoms.push(XAtom {
            point,
            mass: a.mass.value()?,
        });
    }
    let mut conditional = ConditionalFamily::default();
    for key in raw.conditional.atom_laws.keys() {
        let i: usize = key
            .parse()
            .map_err(|_| Error::Parse(format!("atom law key `{key}` is not an index")))?;
        if i >= marginal.atoms.len() {
            return Err(Error::Geometry(format!(
                "atom law `{key}` has no matching X-atom"
            )));
        }
    }
    for i in 0..marginal.atoms.len() {
        let raw_law = raw
            .conditional
            .atom_laws
            .get(&i.to_string())
            .ok_or_else(|| Error::Geometry(format!("X-atom {i} has no conditional law")))?;
        conditional.atom_laws.push(law(raw_law)?);
    }
    if raw.conditional.atom_laws.len() != marginal.atoms.len() {
        return Err(Error::Geometry(
            "atom laws must be keyed by distinct atom indices".into(),
        ));
    }
    for piece in &raw.marginal.pieces {
        marginal.pieces.push(XPiece {
            lower: piece.lower.value()?,
            upper: piece.upper.value()?,
            mass: piece.mass.value()?,
        });
        let comps = piece
            .components
            .as_ref()
            .or(raw.conditional.continuous_components.as_ref())
            .ok_or_else(|| {
                Error::Geometry(
                    "an X-piece needs `components` or a top-level `continuous_components`".into(),
                )
            })?;
        conditional
            .piece_components
            .push(comps.iter().map(component).collect::<Result<_>>()?);
    }
    let options = ModelOptions {
        truncated: raw.truncated,
        notes: raw.notes.clone(),
    };
    let mut model = DistributionModel::new(raw.p, marginal, conditional, options)?;
    if let Some(tail) = &raw.truncation_tail_mass {
        let tail = tail.value()?;
        if !(0.0..=crate::model::MAX_TRUNCATION_TAIL).contains(&tail) {
            return Err(Error::Mass(format!(
                "recorded truncation tail {tail} out of range"
            )));
        }
        model.set_truncation_tail_mass(model.truncation_tail_mass().max(tail));
    }
    Ok(model)
}

/// The raw description of a validated model; validating it again gives the same model.
pub fn model_to_raw(model: &DistributionModel) -> RawModel {
    let n = |v: f64| Number::Float(v);
    let affine = |a: &Affine| RawAffine {
        alpha: n(a.alpha),
        beta: n(a.beta),
    };
    let marginal = RawMarginal {
        atoms: model
            .marginal()
            .atoms
            .iter()
            .map(|a| RawXAtom {
                point: PointSpec::Vector(a.point.iter().map(|&v| n(v)).collect()),
                mass: n(a.mass),
            })
            .collect(),
        pieces: model
            .piece_parts()
            .map(|(p, comps)| RawXPiece {
                lower: n(p.lower),
                upper: n(p.upper),
                mass: n(p.mass),
                components: Some(
                    comps
                        .iter()
                        .map(|c| RawComponent {
                            weight: n(c.weight),
                            lower: affine(&c.lower),
                            upper: (!c.is_point()).then(|| affine(&c.upper)),
                        })
                        .collect(),
                ),
            })
            .collect(),
    };
    let atom_laws = model
        .conditional()
        .atom_laws
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let raw = RawLaw {
                atoms: l
                    .atoms()
                    .iter()
                    .map(|a| RawAtom {
                        location: n(a.location),
                        mass: n(a.mass),
                    })
                    .collect(),
                pieces: l
                    .pieces()
                    .iter()
                    .map(|p| RawPiece {
                        lower: n(p.lower),
                        upper: n(p.upper),
                        mass: n(p.mass),
                    })
                    .collect(),
            };
            (i.to_string(), raw)
        })
        .collect();
    let tail = model.truncation_tail_mass();
    RawModel {
        p: model.p(),
        marginal,
        conditional: RawConditional {
            atom_laws,
            continuous_components: None,
        },
        truncated: false,
        truncation_tail_mass: (tail > 0.0).then(|| n(tail)),
        notes: model.notes().to_vec(),
    }
}

pub fn parse_model(json: &str) -> Result<DistributionModel> {
    let raw: RawModel = serde_json::from_str(json)?;
    validate_model(&raw)
}

pub fn model_to_json(model: &DistributionModel) -> Result<String> {
    Ok(serde_json::to_string_pretty(&model_to_raw(model))?)
}

pub fn load_model(path: &Path) -> Result<DistributionModel> {
    parse_model(&std::fs::read_to_string(path)?)
}

pub fn save_model(model: &DistributionModel, path: &Path) -> Result<()> {
    std::fs::write(path, model_to_json(model)?)?;
    Ok(())
}
