//! Nearest neighbours with uniformly random tie-breaking.
//!
//! Identical rows are grouped first. A row with duplicates takes a random
//! other member of its group (distance zero). A unique row searches the
//! distinct points (sorted adjacency for `p = 1`, a k-d tree otherwise) and
//! draws uniformly among all rows at the minimal distance.
//!
//! Row `i` uses its own ChaCha stream `i` of the seed, so the result does not
//! depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::kdtree::KdTree;
use crate::model::cmp_points;

/// `N(i)`: index of a nearest neighbour of row `i` among the other rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborMap {
    pub neighbors: Vec<usize>,
}

fn row_rng(seed: u64, row: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(row as u64);
    rng
}

/// Groups of identical rows, ordered lexicographically.
struct Groups {
    /// Row indices, grouped.
    members: Vec<usize>,
    /// `members[starts[g]..starts[g + 1]]` is group `g`.
    starts: Vec<usize>,
}

impl Groups {
    fn new(x: &[f64], p: usize) -> Self {
        let n = x.len() / p;
        let row = |i: usize| &x[i * p..(i + 1) * p];
        let members = row_order(x, p);
        let mut starts = vec![0];
        for k in 1..n {
            if row(members[k]) != row(members[k - 1]) {
                starts.push(k);
            }
        }
        starts.push(n);
        Groups { members, starts }
    }

    fn len(&self) -> usize {
        self.starts.len() - 1
    }

    fn group(&self, g: usize) -> &[usize] {
        &self.members[self.starts[g]..self.starts[g + 1]]
    }
}

/// Row indices in lexicographic order of the rows, ties by index. For
/// `p = 1` the sort runs on contiguous `(value, index)` keys.
pub(crate) fn row_order(x: &[f64], p: usize) -> Vec<usize> {
    let n = x.len() / p;
    if p == 1 {
        let mut keyed: Vec<(f64, usize)> = x.iter().copied().zip(0..n).collect();
        keyed.par_sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        return keyed.into_iter().map(|(_, i)| i).collect();
    }
    let row = |i: usize| &x[i * p..(i + 1) * p];
    let mut order: Vec<usize> = (0..n).collect();
    order.par_sort_unstable_by(|&a, &b| cmp_points(row(a), row(b)).then(a.cmp(&b)));
    order
}

/// Uniform draw among all rows of the candidate groups.
fn pick(groups: &Groups, candidates: &[usize], rng: &mut ChaCha8Rng) -> usize {
    let total: usize = candidates.iter().map(|&g| groups.group(g).len()).sum();
    let mut k = rng.random_range(0..total);
    for &g in candidates {
        let members = groups.group(g);
        if k < members.len() {
            return members[k];
        }
        k -= members.len();
    }
    unreachable!("draw index within total")
}

/// Exact nearest neighbours of the rows of `x` (row-major, dimension `p`).
///
/// Requires at least two rows.
pub fn nearest_neighbors(x: &[f64], p: usize, seed: u64) -> NeighborMap {
    let n = x.len() / p;
    assert!(n >= 2, "nearest neighbours need at least two rows");
    let groups = Groups::new(x, p);
    let reps: Vec<f64> = (0..groups.len())
        .flat_map(|g| {
            let i = groups.group(g)[0];
            x[i * p..(i + 1) * p].iter().copied()
        })
        .collect();
    let tree = (p > 1 && groups.len() > 1).then(|| KdTree::new(&reps, p));

    let mut group_of = vec![0; n];
    for g in 0..groups.len() {
        group_of[groups.starts[g]..groups.starts[g + 1]].fill(g);
    }

    // neighbour of the row at each position of `groups.members`
    let by_position: Vec<usize> = (0..n)
        .into_par_iter()
        .map_init(Vec::new, |cands, k| {
            let g = group_of[k];
            let members = groups.group(g);
            let i = groups.members[k];
            if members.len() > 1 {
                let pos = k - groups.starts[g];
                let mut draw = row_rng(seed, i).random_range(0..members.len() - 1);
                if draw >= pos {
                    draw += 1;
                }
                return members[draw];
            }
            match &tree {
                Some(tree) => {
                    tree.nearest_all(&reps[g * p..(g + 1) * p], g, cands);
                }
                None => adjacent_groups(&reps, g, cands),
            }
            if cands.len() == 1 && groups.group(cands[0]).len() == 1 {
                groups.group(cands[0])[0]
            } else {
                cands.sort_unstable();
                pick(&groups, cands, &mut row_rng(seed, i))
            }
        })
        .collect();

    let mut neighbors = vec![0; n];
    for (k, j) in by_position.into_iter().enumerate() {
        neighbors[groups.members[k]] = j;
    }
    NeighborMap { neighbors }
}

/// Nearest distinct values to `values[g]` in a sorted, deduplicated list.
fn adjacent_groups(values: &[f64], g: usize, out: &mut Vec<usize>) {
    out.clear();
    let left = (g > 0).then(|| values[g] - values[g - 1]);
    let right = (g + 1 < values.len()).then(|| values[g + 1] - values[g]);
    match (left, right) {
        (Some(l), Some(r)) if l == r => out.extend([g - 1, g + 1]),
        (Some(l), Some(r)) => out.push(if l < r { g - 1 } else { g + 1 }),
        (Some(_), None) => out.push(g - 1),
        (None, Some(_)) => out.push(g + 1),
        (None, None) => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_examples() {
        let m = nearest_neighbors(&[1.0, 2.0, 4.0, 8.0], 1, 0);
        assert_eq!(m.neighbors, vec![1, 0, 1, 2]);
        let m = nearest_neighbors(&[3.0, 3.0, 9.0], 1, 0);
        assert_eq!(&m.neighbors[..2], &[1, 0]);
        assert!(m.neighbors[2] < 2);
    }

    #[test]
    fn equidistant_tie_uses_both_sides() {
        let mut seen = [false; 2];
        for seed in 0..64 {
            let m = nearest_neighbors(&[0.0, 1.0, 2.0], 1, seed);
            assert_eq!((m.neighbors[0], m.neighbors[2]), (1, 1));
            seen[m.neighbors[1] / 2] = true;
        }
        assert_eq!(seen, [true, true]);
    }

    #[test]
    fn matches_brute_force_in_plane() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x: Vec<f64> = (0..2 * 300)
            .map(|_| (rng.random_range(0..40) as f64) * 0.5)
            .collect();
        let m = nearest_neighbors(&x, 2, 11);
        for i in 0..300 {
            let d =
                |j: usize| (x[2 * i] - x[2 * j]).powi(2) + (x[2 * i + 1] - x[2 * j + 1]).powi(2);
            let best = (0..300)
                .filter(|&j| j != i)
                .map(d)
                .fold(f64::INFINITY, f64::min);
            assert_ne!(m.neighbors[i], i);
            assert_eq!(d(m.neighbors[i]), best);
        }
        assert_eq!(m, nearest_neighbors(&x, 2, 11));
    }
}
