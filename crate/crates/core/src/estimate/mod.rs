//! Nearest-neighbour estimators of ξ, R² and Λ.
//!
//! Pairing every observation with the response of its predictor's nearest
//! neighbour gives an empirical stand-in for the Markov product `(Y, Y')`.
//! ξ is Chatterjee's rank statistic on that pairing, R² the Pearson
//! correlation of the pairs, and Λ their Kendall concordance gap divided by
//! one minus the empirical collision probability of `X`. Everything runs in
//! `O(n log n)`.

mod kdtree;
mod kendall;
mod neighbors;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use kendall::{concordance_counts, ConcordanceCounts};
pub use neighbors::{nearest_neighbors, NeighborMap};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::exact::{MeasurePath, MeasureReport};

/// `R_i = #{j : y_j <= y_i}` and `L_i = #{j : y_j >= y_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankVectors {
    pub r: Vec<u64>,
    pub l: Vec<u64>,
}

/// Tie-aware up and down ranks from one sort.
pub fn compute_ranks(y: &[f64]) -> RankVectors {
    let n = y.len();
    let order = neighbors::row_order(y, 1);
    let mut r = vec![0; n];
    let mut l = vec![0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && y[order[end]] == y[order[start]] {
            end += 1;
        }
        for &i in &order[start..end] {
            r[i] = end as u64;
            l[i] = (n - start) as u64;
        }
        start = end;
    }
    RankVectors { r, l }
}

fn require_rows(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Count(format!(
            "estimators need at least 2 rows, got {n}"
        )));
    }
    Ok(())
}

/// Chatterjee-type statistic
/// `T_n = Σ (n·min(R_i, R_N(i)) − L_i²) / Σ L_i (n − L_i)` in exact integer arithmetic.
pub fn xi_from_neighbors(y: &[f64], map: &NeighborMap) -> Result<f64> {
    require_rows(y.len())?;
    let n = y.len() as i128;
    let ranks = compute_ranks(y);
    let mut num: i128 = 0;
    let mut den: i128 = 0;
    for (i, &j) in map.neighbors.iter().enumerate() {
        let li = ranks.l[i] as i128;
        num += n * ranks.r[i].min(ranks.r[j]) as i128 - li * li;
        den += li * (n - li);
    }
    if den == 0 {
        return Err(Error::Degenerate("all responses are tied".into()));
    }
    Ok(num as f64 / den as f64)
}

/// Pearson correlation of `(y_i, y_N(i))`, summed in a row-order independent way.
pub fn r2_from_neighbors(y: &[f64], map: &NeighborMap) -> Result<f64> {
    require_rows(y.len())?;
    let mut pairs: Vec<(f64, f64)> = map
        .neighbors
        .iter()
        .enumerate()
        .map(|(i, &j)| (y[i], y[j]))
        .collect();
    pairs.par_sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let n = pairs.len() as f64;
    let (sa, sb) = pairs
        .iter()
        .fold((0.0, 0.0), |(sa, sb), &(a, b)| (sa + a, sb + b));
    let (ma, mb) = (sa / n, sb / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for &(a, b) in &pairs {
        let (da, db) = (a - ma, b - mb);
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if saa <= 0.0 || sbb <= 0.0 {
        return Err(Error::Degenerate(
            "paired responses have zero variance".into(),
        ));
    }
    Ok(sab / (saa * sbb).sqrt())
}

/// Unbiased estimate of `P(X = X*)`: `Σ n_z (n_z − 1) / (n (n − 1))` over distinct rows `z`.
pub fn collision_hat(x: &[f64], p: usize) -> Result<f64> {
    let n = x.len() / p;
    require_rows(n)?;
    let row = |i: usize| &x[i * p..(i + 1) * p];
    let order = neighbors::row_order(x, p);
    let mut same: u128 = 0;
    let mut run: u128 = 1;
    for k in 1..n {
        if row(order[k]) == row(order[k - 1]) {
            run += 1;
        } else {
            same += run * (run - 1);
            run = 1;
        }
    }
    same += run * (run - 1);
    Ok(same as f64 / (n as u128 * (n as u128 - 1)) as f64)
}

/// Λ estimate from a given pairing and collision estimate.
pub fn lambda_from_neighbors(y: &[f64], map: &NeighborMap, collision: f64) -> Result<f64> {
    require_rows(y.len())?;
    if 1.0 - collision <= 0.0 {
        return Err(Error::Degenerate("all predictor rows are identical".into()));
    }
    let paired: Vec<f64> = map.neighbors.iter().map(|&j| y[j]).collect();
    Ok(concordance_counts(y, &paired).normalized() / (1.0 - collision))
}

fn neighbors_of(data: &Dataset, seed: u64) -> Result<NeighborMap> {
    require_rows(data.n())?;
    Ok(nearest_neighbors(data.x(), data.p(), seed))
}

fn report(fill: impl FnOnce(&mut MeasureReport)) -> MeasureReport {
    let mut r = MeasureReport::empty(MeasurePath::Estimator);
    fill(&mut r);
    r
}

/// ξ estimate; unclamped.
pub fn xi_hat(data: &Dataset, seed: u64) -> Result<MeasureReport> {
    let map = neighbors_of(data, seed)?;
    let v = xi_from_neighbors(data.y(), &map)?;
    Ok(report(|r| r.xi = Some(v)))
}

/// R² estimate; unclamped.
pub fn r2_hat(data: &Dataset, seed: u64) -> Result<MeasureReport> {
    let map = neighbors_of(data, seed)?;
    let v = r2_from_neighbors(data.y(), &map)?;
    Ok(report(|r| r.r2 = Some(v)))
}

/// Λ estimate; unclamped.
pub fn lambda_hat(data: &Dataset, seed: u64) -> Result<MeasureReport> {
    let map = neighbors_of(data, seed)?;
    let collision = collision_hat(data.x(), data.p())?;
    let v = lambda_from_neighbors(data.y(), &map, collision)?;
    Ok(report(|r| r.lambda = Some(v)))
}

/// Which estimators to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasureSelection {
    pub xi: bool,
    pub r2: bool,
    pub lambda: bool,
}

impl Default for MeasureSelection {
    fn default() -> Self {
        MeasureSelection {
            xi: true,
            r2: true,
            lambda: true,
        }
    }
}

/// All selected estimates from one shared neighbour map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimates {
    pub n: usize,
    pub xi: Option<f64>,
    pub r2: Option<f64>,
    pub lambda: Option<f64>,
    pub collision_hat: f64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Estimates {
    /// Values clipped to `[0, 1]` for presentation.
    pub fn clamped(mut self) -> Self {
        for v in [&mut self.xi, &mut self.r2, &mut self.lambda]
            .into_iter()
            .flatten()
        {
            *v = v.clamp(0.0, 1.0);
        }
        self
    }
}

/// Runs the selected estimators. A degenerate measure is left out with a note.
pub fn estimate_all(data: &Dataset, seed: u64, which: MeasureSelection) -> Result<Estimates> {
    let map = neighbors_of(data, seed)?;
    let collision = collision_hat(data.x(), data.p())?;
    let mut notes = Vec::new();
    let mut keep = |name: &str, v: Result<f64>| match v {
        Ok(v) => Ok(Some(v)),
        Err(Error::Degenerate(msg)) => {
            notes.push(format!("{name} undefined: {msg}"));
            Ok(None)
        }
        Err(e) => Err(e),
    };
    let xi = if which.xi {
        keep("xi", xi_from_neighbors(data.y(), &map))?
    } else {
        None
    };
    let r2 = if which.r2 {
        keep("r2", r2_from_neighbors(data.y(), &map))?
    } else {
        None
    };
    let lambda = if which.lambda {
        keep("lambda", lambda_from_neighbors(data.y(), &map, collision))?
    } else {
        None
    };
    Ok(Estimates {
        n: data.n(),
        xi,
        r2,
        lambda,
        collision_hat: collision,
        seed,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{example_model, ExampleId};

    fn map(v: &[usize]) -> NeighborMap {
        NeighborMap {
            neighbors: v.to_vec(),
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(
            compute_ranks(&[10.0, 20.0, 30.0]),
            RankVectors {
                r: vec![1, 2, 3],
                l: vec![3, 2, 1]
            }
        );
        assert_eq!(
            compute_ranks(&[5.0, 5.0, 5.0]),
            RankVectors {
                r: vec![3, 3, 3],
                l: vec![3, 3, 3]
            }
        );
        assert_eq!(
            compute_ranks(&[2.0, 1.0, 2.0]),
            RankVectors {
                r: vec![3, 1, 3],
                l: vec![2, 3, 2]
            }
        );
    }

    #[test]
    fn xi_hand_example() {
        let d = Dataset::new(1, vec![1.0, 2.0, 4.0, 8.0], vec![1.0, 2.0, 3.0, 4.0], None).unwrap();
        let v = xi_hat(&d, 0).unwrap().xi.unwrap();
        assert!((v + 0.2).abs() < 1e-15, "{v}");
        let flat = Dataset::new(1, vec![1.0, 2.0, 3.0], vec![1.0; 3], None).unwrap();
        assert!(matches!(xi_hat(&flat, 0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn r2_hand_example() {
        let v = r2_from_neighbors(&[1.0, 2.0, 3.0], &map(&[1, 0, 1])).unwrap();
        assert!(v.abs() < 1e-15);
        assert!(matches!(
            r2_from_neighbors(&[1.0, 1.0], &map(&[1, 0])),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn lambda_hand_examples() {
        let ident = map(&[0, 1, 2]);
        // the pairing is given directly: (y_i, y_N(i)) = (1,1), (2,2), (3,3)
        assert_eq!(
            lambda_from_neighbors(&[1.0, 2.0, 3.0], &ident, 0.0).unwrap(),
            1.0
        );
        let rev = map(&[2, 1, 0]);
        assert_eq!(
            lambda_from_neighbors(&[1.0, 2.0, 3.0], &rev, 0.0).unwrap(),
            -1.0
        );
        let d = Dataset::new(1, vec![0.0, 0.0, 0.0], vec![1.0, 2.0, 3.0], None).unwrap();
        assert!(matches!(lambda_hat(&d, 1), Err(Error::Degenerate(_))));
    }

    #[test]
    fn collision_examples() {
        assert!((collision_hat(&[1.0, 1.0, 2.0], 1).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(collision_hat(&[1.0, 2.0, 3.0], 1).unwrap(), 0.0);
        assert!(matches!(collision_hat(&[1.0], 1), Err(Error::Count(_))));
        let d = example_model(ExampleId::Ex2_4)
            .sample_joint(100_000, 3)
            .unwrap();
        assert!((collision_hat(d.x(), 1).unwrap() - 25.0 / 49.0).abs() < 0.01);
    }

    #[test]
    fn consistency_at_extremes() {
        let d = example_model(ExampleId::Ex3_4)
            .sample_joint(10_000, 5)
            .unwrap();
        let v = xi_hat(&d, 5).unwrap().xi.unwrap();
        assert!((0.97..=1.0).contains(&v), "{v}");
        let indep = independent().sample_joint(10_000, 6).unwrap();
        let v = xi_hat(&indep, 6).unwrap().xi.unwrap();
        assert!(v.abs() <= 0.05, "{v}");
    }

    fn independent() -> crate::model::DistributionModel {
        use crate::model::{Component, ConditionalFamily, DistributionModel, MarginalX, XPiece};
        DistributionModel::new(
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
                piece_components: vec![vec![Component::uniform(1.0, 0.0, 1.0)]],
            },
            Default::default(),
        )
        .unwrap()
    }

    #[test]
    fn estimate_all_shares_pairing() {
        let d = example_model(ExampleId::Ex2_5)
            .sample_joint(2000, 8)
            .unwrap();
        let all = estimate_all(&d, 8, MeasureSelection::default()).unwrap();
        assert_eq!(all.xi, xi_hat(&d, 8).unwrap().xi);
        assert_eq!(all.r2, r2_hat(&d, 8).unwrap().r2);
        assert_eq!(all.lambda, lambda_hat(&d, 8).unwrap().lambda);
        let only = estimate_all(
            &d,
            8,
            MeasureSelection {
                xi: false,
                r2: true,
                lambda: false,
            },
        )
        .unwrap();
        assert!(only.xi.is_none() && only.lambda.is_none() && only.r2.is_some());
    }
}
