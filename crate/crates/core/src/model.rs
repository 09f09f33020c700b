//! Joint laws of a predictor vector `X` and a real response `Y`.
//!
//! `X` is a finite set of atoms in any dimension, optionally plus uniform
//! pieces on the line when `p = 1`. Every atom carries its own conditional
//! law. On a piece, the conditional law is a mixture of components, each
//! either a point mass moving affinely with `x` or a fixed uniform interval.
//! This family is closed under everything the crate computes: the response
//! marginal is again a [`MixedLaw1D`], and the Markov-product CDF and all
//! measures reduce to piecewise polynomial integrals.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::law::{draw_kernel, Kernel, LawSampler, MixedLaw1D};

/// Tolerance for raw masses before renormalization.
pub const RAW_MASS_TOL: f64 = 1e-6;

/// Largest admissible discarded tail of a truncated countable family.
pub const MAX_TRUNCATION_TAIL: f64 = 1e-9;

/// `x ↦ alpha + beta·x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Affine {
    pub alpha: f64,
    pub beta: f64,
}

impl Affine {
    pub fn constant(alpha: f64) -> Self {
        Affine { alpha, beta: 0.0 }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.alpha + self.beta * x
    }
}

/// One mixture component of the conditional law on a continuous piece.
///
/// `lower == upper` denotes a point mass at `lower(x)`; otherwise the
/// component is uniform on `[lower, upper]`, which must not depend on `x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub weight: f64,
    pub lower: Affine,
    pub upper: Affine,
}

impl Component {
    pub fn point(weight: f64, map: Affine) -> Self {
        Component {
            weight,
            lower: map,
            upper: map,
        }
    }

    pub fn uniform(weight: f64, lower: f64, upper: f64) -> Self {
        Component {
            weight,
            lower: Affine::constant(lower),
            upper: Affine::constant(upper),
        }
    }

    pub fn is_point(&self) -> bool {
        self.lower == self.upper
    }

    pub fn kernel(&self, x: f64) -> Kernel {
        if self.is_point() {
            Kernel::Point(self.lower.eval(x))
        } else {
            Kernel::Uniform {
                lower: self.lower.alpha,
                upper: self.upper.alpha,
            }
        }
    }

    /// Values of `y` at which the component's CDF has a jump or kink, as affine functions of `x`.
    pub(crate) fn events(&self) -> Vec<Affine> {
        if self.is_point() {
            vec![self.lower]
        } else {
            vec![self.lower, self.upper]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XAtom {
    pub point: Vec<f64>,
    pub mass: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XPiece {
    pub lower: f64,
    pub upper: f64,
    pub mass: f64,
}

impl XPiece {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Law of `X`: atoms in `R^p` plus, for `p = 1`, uniform pieces.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MarginalX {
    pub atoms: Vec<XAtom>,
    pub pieces: Vec<XPiece>,
}

/// Conditional laws of `Y` given `X`, aligned index by index with [`MarginalX`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConditionalFamily {
    pub atom_laws: Vec<MixedLaw1D>,
    pub piece_components: Vec<Vec<Component>>,
}

/// Validated joint law of `(X, Y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionModel {
    p: usize,
    marginal: MarginalX,
    conditional: ConditionalFamily,
    truncation_tail_mass: f64,
    notes: Vec<String>,
}

/// Options for [`DistributionModel::new`].
#[derive(Clone, Debug, Default)]
pub struct ModelOptions {
    /// The atom list is a truncation of a countable family; the missing mass is recorded.
    pub truncated: bool,
    pub notes: Vec<String>,
}

impl DistributionModel {
    /// Validates and normalizes a model.
    pub fn new(
        p: usize,
        mut marginal: MarginalX,
        mut conditional: ConditionalFamily,
        options: ModelOptions,
    ) -> Result<Self> {
        if p == 0 {
            return Err(Error::Dimension(
                "predictor dimension must be positive".into(),
            ));
        }
        if let Some(a) = marginal.atoms.iter().find(|a| a.point.len() != p) {
            return Err(Error::Dimension(format!(
                "atom {:?} has length {}, expected {p}",
                a.point,
                a.point.len()
            )));
        }
        if p > 1 && !marginal.pieces.is_empty() {
            return Err(Error::Dimension(
                "continuous X is only supported for p = 1".into(),
            ));
        }
        if marginal.atoms.is_empty() && marginal.pieces.is_empty() {
            return Err(Error::Mass("empty marginal".into()));
        }
        if conditional.atom_laws.len() != marginal.atoms.len() {
            return Err(Error::Geometry(format!(
                "{} X-atoms but {} conditional laws",
                marginal.atoms.len(),
                conditional.atom_laws.len()
            )));
        }
        if conditional.piece_components.len() != marginal.pieces.len() {
            return Err(Error::Geometry(format!(
                "{} X-pieces but {} component lists",
                marginal.pieces.len(),
                conditional.piece_components.len()
            )));
        }

        let mut total = 0.0;
        for a in &marginal.atoms {
            if !(a.mass >= 0.0) || a.point.iter().any(|v| !v.is_finite()) {
                return Err(Error::Mass(format!("invalid atom {a:?}")));
            }
            total += a.mass;
        }
        for piece in &marginal.pieces {
            if !(piece.mass >= 0.0) {
                return Err(Error::Mass(format!("invalid piece mass {piece:?}")));
            }
            if !(piece.lower < piece.upper) || !piece.lower.is_finite() || !piece.upper.is_finite()
            {
                return Err(Error::Geometry(format!(
                    "X-piece [{}, {}] must satisfy lower < upper",
                    piece.lower, piece.upper
                )));
            }
            total += piece.mass;
        }
        if (total - 1.0).abs() > RAW_MASS_TOL {
            return Err(Error::Mass(format!(
                "X masses sum to {total}, expected 1 within {RAW_MASS_TOL}"
            )));
        }
        let tail = if options.truncated {
            (1.0 - total).max(0.0)
        } else {
            0.0
        };
        if tail > MAX_TRUNCATION_TAIL {
            return Err(Error::Mass(format!(
                "truncation tail {tail} exceeds {MAX_TRUNCATION_TAIL}; retain more atoms"
            )));
        }
        for a in &mut marginal.atoms {
            a.mass /= total;
        }
        for piece in &mut marginal.pieces {
            piece.mass /= total;
        }

        let mut sorted: Vec<&Vec<f64>> = marginal.atoms.iter().map(|a| &a.point).collect();
        sorted.sort_by(|a, b| cmp_points(a, b));
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Geometry("duplicate X-atoms".into()));
        }
        let mut order: Vec<usize> = (0..marginal.pieces.len()).collect();
        order.sort_by(|&i, &j| {
            marginal.pieces[i]
                .lower
                .total_cmp(&marginal.pieces[j].lower)
        });
        for w in order.windows(2) {
            if marginal.pieces[w[1]].lower < marginal.pieces[w[0]].upper {
                return Err(Error::Geometry("X-pieces overlap".into()));
            }
        }

        for (piece, comps) in marginal
            .pieces
            .iter()
            .zip(conditional.piece_components.iter_mut())
        {
            validate_components(piece, comps)?;
        }

        Ok(DistributionModel {
            p,
            marginal,
            conditional,
            truncation_tail_mass: tail,
            notes: options.notes,
        })
    }

    /// Discrete model: atoms in `R^p` with their conditional laws.
    pub fn discrete(points: Vec<(Vec<f64>, f64, MixedLaw1D)>) -> Result<Self> {
        let p = points.first().map(|(x, _, _)| x.len()).unwrap_or(1);
        let mut marginal = MarginalX::default();
        let mut conditional = ConditionalFamily::default();
        for (point, mass, law) in points {
            marginal.atoms.push(XAtom { point, mass });
            conditional.atom_laws.push(law);
        }
        DistributionModel::new(p, marginal, conditional, ModelOptions::default())
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn marginal(&self) -> &MarginalX {
        &self.marginal
    }

    pub fn conditional(&self) -> &ConditionalFamily {
        &self.conditional
    }

    pub fn truncation_tail_mass(&self) -> f64 {
        self.truncation_tail_mass
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub(crate) fn set_truncation_tail_mass(&mut self, tail: f64) {
        self.truncation_tail_mass = tail;
    }

    pub fn has_continuous_part(&self) -> bool {
        !self.marginal.pieces.is_empty()
    }

    /// `(mass, law)` for every X-atom.
    pub fn atom_parts(&self) -> impl Iterator<Item = (&XAtom, &MixedLaw1D)> {
        self.marginal
            .atoms
            .iter()
            .zip(self.conditional.atom_laws.iter())
    }

    /// `(piece, components)` for every continuous X-piece.
    pub fn piece_parts(&self) -> impl Iterator<Item = (&XPiece, &[Component])> {
        self.marginal.pieces.iter().zip(
            self.conditional
                .piece_components
                .iter()
                .map(|c| c.as_slice()),
        )
    }

    /// Exact conditional law of `Y` given `X = x`.
    pub fn conditional_law(&self, x: &[f64]) -> Result<MixedLaw1D> {
        if x.len() != self.p {
            return Err(Error::Dimension(format!(
                "x has length {}, expected {}",
                x.len(),
                self.p
            )));
        }
        if let Some((_, law)) = self.atom_parts().find(|(a, _)| a.point.as_slice() == x) {
            return Ok(law.clone());
        }
        if self.p == 1 {
            if let Some((_, comps)) = self.piece_parts().find(|(piece, _)| piece.contains(x[0])) {
                return Ok(components_law(comps, x[0]));
            }
        }
        Err(Error::Support(format!(
            "x = {x:?} lies outside the support of X"
        )))
    }

    /// Exact marginal law of `Y`.
    pub fn marginal_law_y(&self) -> MixedLaw1D {
        let mut kernels = Vec::new();
        for (atom, law) in self.atom_parts() {
            kernels.extend(law.kernels().map(|(m, k)| (atom.mass * m, k)));
        }
        for (piece, comps) in self.piece_parts() {
            for c in comps {
                let k = if c.is_point() {
                    let (ya, yb) = (c.lower.eval(piece.lower), c.lower.eval(piece.upper));
                    if ya == yb {
                        Kernel::Point(ya)
                    } else {
                        Kernel::Uniform {
                            lower: ya.min(yb),
                            upper: ya.max(yb),
                        }
                    }
                } else {
                    c.kernel(piece.lower)
                };
                kernels.push((piece.mass * c.weight, k));
            }
        }
        MixedLaw1D::from_kernels(kernels)
    }

    /// `P(X = X*)` for an independent copy `X*`.
    pub fn collision_probability(&self) -> f64 {
        self.marginal.atoms.iter().map(|a| a.mass * a.mass).sum()
    }

    /// Builds a reusable sampler.
    pub fn sampler(&self) -> JointSampler<'_> {
        JointSampler::new(self)
    }

    /// `n` i.i.d. draws of `(X, Y)`; deterministic in `(model, n, seed)`.
    pub fn sample_joint(&self, n: usize, seed: u64) -> Result<Dataset> {
        if n == 0 {
            return Err(Error::Count("sample size must be at least 1".into()));
        }
        let sampler = self.sampler();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = Vec::with_capacity(n * self.p);
        let mut y = Vec::with_capacity(n);
        for _ in 0..n {
            let source = sampler.draw_x(&mut rng);
            x.extend_from_slice(sampler.x_value(&source));
            y.push(sampler.draw_y(&source, &mut rng));
        }
        Dataset::new(self.p, x, y, Some(seed))
    }
}

/// Conditional law on a continuous piece at `x`.
pub(crate) fn components_law(comps: &[Component], x: f64) -> MixedLaw1D {
    MixedLaw1D::from_kernels(comps.iter().map(|c| (c.weight, c.kernel(x))))
}

fn validate_components(piece: &XPiece, comps: &mut [Component]) -> Result<()> {
    if comps.is_empty() {
        return Err(Error::Geometry(format!(
            "X-piece [{}, {}] has no conditional components",
            piece.lower, piece.upper
        )));
    }
    let mut total = 0.0;
    for c in comps.iter() {
        if !(c.weight >= 0.0) {
            return Err(Error::Mass(format!(
                "negative component weight {}",
                c.weight
            )));
        }
        total += c.weight;
        let finite = [c.lower.alpha, c.lower.beta, c.upper.alpha, c.upper.beta]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Geometry("non-finite component coefficients".into()));
        }
        if !c.is_point() {
            if c.lower.beta != 0.0 || c.upper.beta != 0.0 {
                return Err(Error::Geometry(
                    "a uniform component must have x-independent endpoints (beta = 0)".into(),
                ));
            }
            if !(c.lower.alpha < c.upper.alpha) {
                return Err(Error::Geometry(format!(
                    "component lower {} exceeds upper {}",
                    c.lower.alpha, c.upper.alpha
                )));
            }
        }
    }
    if (total - 1.0).abs() > RAW_MASS_TOL {
        return Err(Error::Mass(format!(
            "component weights sum to {total}, expected 1"
        )));
    }
    for c in comps.iter_mut() {
        c.weight /= total;
    }
    Ok(())
}

pub(crate) fn cmp_points(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (u, v) in a.iter().zip(b) {
        match u.total_cmp(v) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Where a draw of `X` landed.
#[derive(Clone, Debug)]
pub enum XDraw {
    Atom(usize),
    Piece { index: usize, x: [f64; 1] },
}

/// Sampler for `X` and for `Y` given a drawn `X`.
#[derive(Clone, Debug)]
pub struct JointSampler<'a> {
    model: &'a DistributionModel,
    top: Option<WeightedIndex<f64>>,
    atom_samplers: Vec<LawSampler>,
    component_index: Vec<Option<WeightedIndex<f64>>>,
}

impl<'a> JointSampler<'a> {
    fn new(model: &'a DistributionModel) -> Self {
        let masses: Vec<f64> = model
            .marginal
            .atoms
            .iter()
            .map(|a| a.mass)
            .chain(model.marginal.pieces.iter().map(|p| p.mass))
            .collect();
        let top =
            (masses.len() > 1).then(|| WeightedIndex::new(&masses).expect("validated masses"));
        let atom_samplers = model
            .conditional
            .atom_laws
            .iter()
            .map(|l| l.sampler())
            .collect();
        let component_index = model
            .conditional
            .piece_components
            .iter()
            .map(|comps| {
                (comps.len() > 1).then(|| {
                    WeightedIndex::new(comps.iter().map(|c| c.weight)).expect("validated weights")
                })
            })
            .collect();
        JointSampler {
            model,
            top,
            atom_samplers,
            component_index,
        }
    }

    pub fn draw_x<R: Rng + ?Sized>(&self, rng: &mut R) -> XDraw {
        let k = self.top.as_ref().map_or(0, |ix| ix.sample(rng));
        let n_atoms = self.model.marginal.atoms.len();
        if k < n_atoms {
            XDraw::Atom(k)
        } else {
            let index = k - n_atoms;
            let piece = &self.model.marginal.pieces[index];
            let x = piece.lower + (piece.upper - piece.lower) * rng.random::<f64>();
            XDraw::Piece { index, x: [x] }
        }
    }

    pub fn x_value<'b>(&'b self, draw: &'b XDraw) -> &'b [f64] {
        match draw {
            XDraw::Atom(i) => &self.model.marginal.atoms[*i].point,
            XDraw::Piece { x, .. } => x,
        }
    }

    pub fn draw_y<R: Rng + ?Sized>(&self, draw: &XDraw, rng: &mut R) -> f64 {
        match draw {
            XDraw::Atom(i) => self.atom_samplers[*i].sample(rng),
            XDraw::Piece { index, x } => {
                let comps = &self.model.conditional.piece_components[*index];
                let c = match &self.component_index[*index] {
                    Some(ix) => comps[ix.sample(rng)],
                    None => comps[0],
                };
                draw_kernel(c.kernel(x[0]), rng)
            }
        }
    }
}
