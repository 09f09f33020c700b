//! Directed dependence measures ξ, R² and Λ: exact evaluation on a family of
//! mixed discrete/continuous models, Markov-product representations,
//! nearest-neighbour estimators and checks for the extreme cases.

// `!(a >= b)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod characterize;
pub mod data;
pub mod error;
pub mod estimate;
pub mod exact;
pub mod law;
pub mod markov;
pub mod model;
pub mod model_file;
mod quad;
pub mod suite;

pub use catalog::{example_model, ExampleId};
pub use data::{Dataset, MarkovDataset};
pub use error::{Error, Result};
pub use law::{Atom, Bound, CdfTable, Kernel, MixedLaw1D, Piece};
pub use model::{
    Affine, Component, ConditionalFamily, DistributionModel, MarginalX, ModelOptions, XAtom, XPiece,
};
