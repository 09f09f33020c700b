//! One-dimensional laws built from point masses and uniform pieces.
//!
//! [`MixedLaw1D`] is the carrier for every marginal and conditional
//! distribution of the response. Its CDF is piecewise linear with jumps,
//! which keeps every functional the crate needs in closed form.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the total mass of a law.
pub const MASS_TOL: f64 = 1e-12;

/// Slack used when comparing CDF values against probability levels.
pub(crate) const LEVEL_EPS: f64 = 1e-12;

/// An elementary probability kernel: a point mass or a uniform interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Kernel {
    Point(f64),
    Uniform { lower: f64, upper: f64 },
}

impl Kernel {
    pub fn cdf(&self, y: f64) -> f64 {
        match *self {
            Kernel::Point(c) => (c <= y) as u8 as f64,
            Kernel::Uniform { lower, upper } => ((y - lower) / (upper - lower)).clamp(0.0, 1.0),
        }
    }

    /// `P(K < y)`.
    pub fn cdf_left(&self, y: f64) -> f64 {
        match *self {
            Kernel::Point(c) => (c < y) as u8 as f64,
            Kernel::Uniform { .. } => self.cdf(y),
        }
    }

    /// `P(K >= y)`.
    pub fn survival(&self, y: f64) -> f64 {
        match *self {
            Kernel::Point(c) => (c >= y) as u8 as f64,
            Kernel::Uniform { lower, upper } => ((upper - y) / (upper - lower)).clamp(0.0, 1.0),
        }
    }

    pub fn cdf_at(&self, bound: Bound) -> f64 {
        if bound.inclusive {
            self.cdf(bound.value)
        } else {
            self.cdf_left(bound.value)
        }
    }

    pub fn lower(&self) -> f64 {
        match *self {
            Kernel::Point(c) => c,
            Kernel::Uniform { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> f64 {
        match *self {
            Kernel::Point(c) => c,
            Kernel::Uniform { upper, .. } => upper,
        }
    }

    pub fn mean(&self) -> f64 {
        0.5 * (self.lower() + self.upper())
    }

    pub fn second_moment(&self) -> f64 {
        let (a, b) = (self.lower(), self.upper());
        (a * a + a * b + b * b) / 3.0
    }

    /// `∫ P(K <= z) dz` from `-∞` to `z`.
    pub(crate) fn cdf_antiderivative(&self, z: f64) -> f64 {
        match *self {
            Kernel::Point(c) => (z - c).max(0.0),
            Kernel::Uniform { lower, upper } => {
                if z <= lower {
                    0.0
                } else if z >= upper {
                    0.5 * (upper - lower) + (z - upper)
                } else {
                    0.5 * (z - lower) * (z - lower) / (upper - lower)
                }
            }
        }
    }
}

/// Half-line event `{Y <= value}` (inclusive) or `{Y < value}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bound {
    pub value: f64,
    pub inclusive: bool,
}

impl Bound {
    pub fn le(value: f64) -> Self {
        Bound {
            value,
            inclusive: true,
        }
    }

    pub fn lt(value: f64) -> Self {
        Bound {
            value,
            inclusive: false,
        }
    }

    pub fn everything() -> Self {
        Bound::le(f64::INFINITY)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

/// Mass spread uniformly over `[lower, upper]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub lower: f64,
    pub upper: f64,
    pub mass: f64,
}

/// A law on the real line made of atoms and uniform pieces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedLaw1D {
    atoms: Vec<Atom>,
    pieces: Vec<Piece>,
}

impl MixedLaw1D {
    /// Validating constructor. Masses must already sum to one.
    pub fn new(atoms: Vec<Atom>, pieces: Vec<Piece>) -> Result<Self> {
        let mut total = 0.0;
        for a in &atoms {
            if !(a.mass >= 0.0) || !a.location.is_finite() {
                return Err(Error::Mass(format!("invalid atom {a:?}")));
            }
            total += a.mass;
        }
        for p in &pieces {
            if !(p.mass >= 0.0) {
                return Err(Error::Mass(format!("negative piece mass {p:?}")));
            }
            if !(p.lower < p.upper) || !p.lower.is_finite() || !p.upper.is_finite() {
                return Err(Error::Geometry(format!(
                    "piece [{}, {}] must satisfy lower < upper (state point masses as atoms)",
                    p.lower, p.upper
                )));
            }
            total += p.mass;
        }
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::Mass(format!(
                "law masses sum to {total}, expected 1"
            )));
        }
        let mut law = MixedLaw1D { atoms, pieces };
        law.sort();
        if law.atoms.windows(2).any(|w| w[0].location == w[1].location) {
            return Err(Error::Geometry("duplicate atom locations".into()));
        }
        Ok(law)
    }

    /// Builds a law from weighted kernels, merging coincident atoms and
    /// dropping null mass. Used for laws derived from a validated model.
    pub fn from_kernels<I: IntoIterator<Item = (f64, Kernel)>>(kernels: I) -> Self {
        let mut atoms: Vec<Atom> = Vec::new();
        let mut pieces = Vec::new();
        for (mass, k) in kernels {
            if mass <= 0.0 {
                continue;
            }
            match k {
                Kernel::Point(location) => atoms.push(Atom { location, mass }),
                Kernel::Uniform { lower, upper } if lower == upper => atoms.push(Atom {
                    location: lower,
                    mass,
                }),
                Kernel::Uniform { lower, upper } => pieces.push(Piece { lower, upper, mass }),
            }
        }
        atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if last.location == a.location => last.mass += a.mass,
                _ => merged.push(a),
            }
        }
        let mut law = MixedLaw1D {
            atoms: merged,
            pieces,
        };
        law.sort();
        law
    }

    pub fn uniform(lower: f64, upper: f64) -> Result<Self> {
        MixedLaw1D::new(
            vec![],
            vec![Piece {
                lower,
                upper,
                mass: 1.0,
            }],
        )
    }

    pub fn point(location: f64) -> Self {
        MixedLaw1D {
            atoms: vec![Atom {
                location,
                mass: 1.0,
            }],
            pieces: vec![],
        }
    }

    fn sort(&mut self) {
        self.atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
        self.pieces.sort_by(|a, b| {
            a.lower
                .total_cmp(&b.lower)
                .then(a.upper.total_cmp(&b.upper))
        });
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum::<f64>()
            + self.pieces.iter().map(|p| p.mass).sum::<f64>()
    }

    pub fn kernels(&self) -> impl Iterator<Item = (f64, Kernel)> + '_ {
        self.atoms
            .iter()
            .map(|a| (a.mass, Kernel::Point(a.location)))
            .chain(self.pieces.iter().map(|p| {
                (
                    p.mass,
                    Kernel::Uniform {
                        lower: p.lower,
                        upper: p.upper,
                    },
                )
            }))
    }

    /// Right-continuous CDF.
    pub fn cdf(&self, y: f64) -> f64 {
        self.kernels()
            .map(|(m, k)| m * k.cdf(y))
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }

    /// `P(Y < y)`.
    pub fn cdf_left(&self, y: f64) -> f64 {
        self.kernels()
            .map(|(m, k)| m * k.cdf_left(y))
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }

    /// `P(Y >= y)`.
    pub fn survival(&self, y: f64) -> f64 {
        self.kernels()
            .map(|(m, k)| m * k.survival(y))
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }

    pub fn cdf_at(&self, bound: Bound) -> f64 {
        self.kernels()
            .map(|(m, k)| m * k.cdf_at(bound))
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }

    pub fn mass_at(&self, y: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.location == y)
            .map(|a| a.mass)
            .sum()
    }

    /// Sorted, deduplicated atom locations and piece endpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self
            .atoms
            .iter()
            .map(|a| a.location)
            .chain(self.pieces.iter().flat_map(|p| [p.lower, p.upper]))
            .collect();
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    /// Smallest and largest point of the support.
    pub fn support(&self) -> (f64, f64) {
        let b = self.breakpoints();
        (b[0], b[b.len() - 1])
    }

    /// True when the law is a single point mass.
    pub fn is_degenerate(&self) -> bool {
        self.pieces.is_empty() && self.atoms.len() == 1
    }

    pub fn mean(&self) -> f64 {
        self.kernels().map(|(m, k)| m * k.mean()).sum()
    }

    pub fn second_moment(&self) -> f64 {
        self.kernels().map(|(m, k)| m * k.second_moment()).sum()
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        (self.second_moment() - mu * mu).max(0.0)
    }

    /// Generalized inverse `inf{y : F(y) >= u}`; `u = 0` maps to the lower end of the support.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::Domain(format!("quantile level {u} outside [0, 1]")));
        }
        Ok(CdfTable::new(self).quantile(u))
    }

    /// Law of `F(Z)` for `Z` distributed as `self`, where `F` is the CDF of `reference`.
    ///
    /// `self` must be absolutely continuous with respect to `reference`,
    /// which holds for every conditional law against the response marginal.
    pub fn pushforward(&self, reference: &MixedLaw1D) -> MixedLaw1D {
        let table = CdfTable::new(reference);
        let mut out = Vec::new();
        for a in &self.atoms {
            out.push((a.mass, Kernel::Point(table.cdf(a.location))));
        }
        for p in &self.pieces {
            let density = p.mass / (p.upper - p.lower);
            let mut cuts = vec![p.lower];
            cuts.extend(
                table
                    .breaks
                    .iter()
                    .copied()
                    .filter(|&b| b > p.lower && b < p.upper),
            );
            cuts.push(p.upper);
            for w in cuts.windows(2) {
                let (s, t) = (w[0], w[1]);
                let lo = table.cdf(s);
                let hi = table.cdf_left(t);
                let mass = density * (t - s);
                if hi > lo {
                    out.push((
                        mass,
                        Kernel::Uniform {
                            lower: lo,
                            upper: hi,
                        },
                    ));
                } else {
                    out.push((mass, Kernel::Point(lo)));
                }
            }
        }
        MixedLaw1D::from_kernels(out)
    }

    pub fn sampler(&self) -> LawSampler {
        LawSampler::new(self)
    }
}

/// Draws from a [`MixedLaw1D`].
#[derive(Clone, Debug)]
pub struct LawSampler {
    kernels: Vec<Kernel>,
    index: Option<WeightedIndex<f64>>,
}

impl LawSampler {
    fn new(law: &MixedLaw1D) -> Self {
        let (masses, kernels): (Vec<f64>, Vec<Kernel>) = law.kernels().unzip();
        let index = if kernels.len() > 1 {
            Some(WeightedIndex::new(&masses).expect("validated masses"))
        } else {
            None
        };
        LawSampler { kernels, index }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let k = match &self.index {
            Some(ix) => self.kernels[ix.sample(rng)],
            None => self.kernels[0],
        };
        draw_kernel(k, rng)
    }
}

pub(crate) fn draw_kernel<R: Rng + ?Sized>(k: Kernel, rng: &mut R) -> f64 {
    match k {
        Kernel::Point(c) => c,
        Kernel::Uniform { lower, upper } => lower + (upper - lower) * rng.random::<f64>(),
    }
}

/// Tabulated CDF for fast repeated evaluation: values at each breakpoint
/// and linear interpolation in between.
#[derive(Clone, Debug)]
pub struct CdfTable {
    breaks: Vec<f64>,
    right: Vec<f64>,
    left: Vec<f64>,
}

impl CdfTable {
    pub fn new(law: &MixedLaw1D) -> Self {
        let breaks = law.breakpoints();
        let right = breaks.iter().map(|&b| law.cdf(b)).collect();
        let left = breaks.iter().map(|&b| law.cdf_left(b)).collect();
        CdfTable {
            breaks,
            right,
            left,
        }
    }

    pub fn cdf(&self, y: f64) -> f64 {
        // number of breakpoints <= y
        let i = self.breaks.partition_point(|&b| b <= y);
        if i == 0 {
            return 0.0;
        }
        if i == self.breaks.len() {
            return 1.0;
        }
        let b0 = self.breaks[i - 1];
        if y == b0 {
            return self.right[i - 1];
        }
        let b1 = self.breaks[i];
        let (f0, f1) = (self.right[i - 1], self.left[i]);
        f0 + (f1 - f0) * (y - b0) / (b1 - b0)
    }

    /// Density of the continuous part at a point strictly between breakpoints.
    pub(crate) fn slope(&self, y: f64) -> f64 {
        let i = self.breaks.partition_point(|&b| b <= y);
        if i == 0 || i == self.breaks.len() {
            return 0.0;
        }
        (self.left[i] - self.right[i - 1]) / (self.breaks[i] - self.breaks[i - 1])
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn cdf_left(&self, y: f64) -> f64 {
        let i = self.breaks.partition_point(|&b| b < y);
        if i < self.breaks.len() && self.breaks[i] == y {
            return self.left[i];
        }
        self.cdf(y)
    }

    /// `inf{y : F(y) >= u}`.
    pub fn quantile(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return self.breaks[0];
        }
        let mut prev_b = f64::NEG_INFINITY;
        let mut prev_f = 0.0;
        for (i, &b) in self.breaks.iter().enumerate() {
            if i > 0 && self.left[i] >= u && self.left[i] > prev_f {
                return prev_b + (u - prev_f) / (self.left[i] - prev_f) * (b - prev_b);
            }
            if self.right[i] >= u {
                return b;
            }
            prev_b = b;
            prev_f = self.right[i];
        }
        self.breaks[self.breaks.len() - 1]
    }

    /// The event `{F(Y) <= u}` written as a half-line bound on `Y`.
    pub fn level_bound(&self, u: f64) -> Bound {
        if u >= 1.0 - LEVEL_EPS {
            return Bound::everything();
        }
        if u < 0.0 {
            return Bound::lt(f64::NEG_INFINITY);
        }
        let mut prev_b = f64::NEG_INFINITY;
        let mut prev_f = 0.0;
        for (i, &b) in self.breaks.iter().enumerate() {
            if i > 0 && self.left[i] > u + LEVEL_EPS && self.left[i] > prev_f {
                // F crosses u strictly inside (prev_b, b); F is continuous there
                let y = prev_b + (u - prev_f) / (self.left[i] - prev_f) * (b - prev_b);
                return Bound::le(y);
            }
            if self.right[i] > u + LEVEL_EPS {
                return if self.left[i] <= u + LEVEL_EPS && self.right[i] - self.left[i] > 0.0 {
                    Bound::lt(b)
                } else {
                    Bound::le(b)
                };
            }
            prev_b = b;
            prev_f = self.right[i];
        }
        Bound::everything()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex24_marginal() -> MixedLaw1D {
        MixedLaw1D::new(
            vec![],
            vec![
                Piece {
                    lower: -1.5,
                    upper: -0.5,
                    mass: 2.0 / 7.0,
                },
                Piece {
                    lower: -0.5,
                    upper: 0.5,
                    mass: 3.0 / 7.0,
                },
                Piece {
                    lower: 0.5,
                    upper: 1.5,
                    mass: 2.0 / 7.0,
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn uniform_cdf() {
        let u = MixedLaw1D::uniform(0.0, 1.0).unwrap();
        assert!((u.cdf(0.3) - 0.3).abs() < 1e-15);
        assert_eq!(u.quantile(0.25).unwrap(), 0.25);
    }

    #[test]
    fn atom_cdf_and_quantile() {
        let law = MixedLaw1D::new(
            vec![
                Atom {
                    location: -1.0,
                    mass: 1.0 / 3.0,
                },
                Atom {
                    location: 2.0,
                    mass: 2.0 / 3.0,
                },
            ],
            vec![],
        )
        .unwrap();
        assert!((law.cdf(-1.0) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(law.cdf_left(-1.0), 0.0);
        assert_eq!(law.quantile(0.2).unwrap(), -1.0);
        assert_eq!(law.quantile(1.0 / 3.0).unwrap(), -1.0);
        assert_eq!(law.quantile(0.5).unwrap(), 2.0);
    }

    #[test]
    fn piecewise_cdf() {
        let law = ex24_marginal();
        assert!((law.cdf(0.5) - 5.0 / 7.0).abs() < 1e-15);
        let t = CdfTable::new(&law);
        assert!((t.cdf(0.5) - 5.0 / 7.0).abs() < 1e-15);
        assert!((t.cdf(0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_laws() {
        assert!(matches!(
            MixedLaw1D::new(
                vec![Atom {
                    location: 0.0,
                    mass: 0.5
                }],
                vec![]
            ),
            Err(Error::Mass(_))
        ));
        assert!(matches!(
            MixedLaw1D::uniform(1.0, 1.0),
            Err(Error::Geometry(_))
        ));
        assert!(matches!(
            MixedLaw1D::new(
                vec![
                    Atom {
                        location: 0.0,
                        mass: 0.5
                    },
                    Atom {
                        location: 0.0,
                        mass: 0.5
                    }
                ],
                vec![]
            ),
            Err(Error::Geometry(_))
        ));
        assert!(matches!(
            MixedLaw1D::uniform(0.0, 1.0).unwrap().quantile(1.5),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn level_bound_at_atoms() {
        let law = MixedLaw1D::new(
            vec![
                Atom {
                    location: -1.0,
                    mass: 1.0 / 3.0,
                },
                Atom {
                    location: 2.0,
                    mass: 2.0 / 3.0,
                },
            ],
            vec![],
        )
        .unwrap();
        let t = CdfTable::new(&law);
        // F is flat at 1/3 on [-1, 2), so F(Y) <= 1/3 and F(Y) <= 0.5 are both Y < 2
        assert_eq!(t.level_bound(1.0 / 3.0), Bound::lt(2.0));
        assert_eq!(t.level_bound(0.5), Bound::lt(2.0));
        assert_eq!(t.level_bound(0.1), Bound::lt(-1.0));
    }

    #[test]
    fn pushforward_through_own_cdf() {
        let law = ex24_marginal();
        let t = law.pushforward(&law);
        assert!(t.atoms().is_empty());
        for u in [0.1, 0.3, 0.5, 0.9] {
            assert!((t.cdf(u) - u).abs() < 1e-12);
        }
    }

    #[test]
    fn antiderivative_matches_mean_relation() {
        // ∫_{-∞}^{z} F = z - E[K] for z above the support
        let k = Kernel::Uniform {
            lower: 1.0,
            upper: 3.0,
        };
        assert!((k.cdf_antiderivative(5.0) - (5.0 - 2.0)).abs() < 1e-15);
        assert_eq!(Kernel::Point(1.0).cdf_antiderivative(0.5), 0.0);
    }
}
