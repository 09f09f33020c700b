//! Concordance counts in `O(n log n)`.
//!
//! After sorting the pairs by `(u, v)`, a pair `i < j` with `v_i > v_j`
//! necessarily has `u_i < u_j`, so the strict inversions of the `v`
//! sequence are exactly the discordant pairs. The concordant count follows
//! from the tie totals:
//! `C + D = n(n-1)/2 − T_u − T_v + T_uv`.

use rayon::prelude::*;

/// Concordant and discordant index pairs; pairs tied in either coordinate count in neither.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConcordanceCounts {
    pub concordant: u64,
    pub discordant: u64,
    pub pairs: u64,
}

impl ConcordanceCounts {
    pub fn difference(&self) -> i128 {
        self.concordant as i128 - self.discordant as i128
    }

    /// `(C − D) / (n(n−1)/2)`.
    pub fn normalized(&self) -> f64 {
        if self.pairs == 0 {
            return 0.0;
        }
        self.difference() as f64 / self.pairs as f64
    }
}

fn tied_pairs<T: PartialEq>(sorted: &[T]) -> u64 {
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Sorts `v` and returns the number of pairs `i < j` with `v[i] > v[j]`.
pub(crate) fn count_inversions(v: &mut Vec<f64>) -> u64 {
    let n = v.len();
    let mut src = std::mem::take(v);
    let mut dst = vec![0.0; n];
    let mut inversions = 0u64;
    let mut width = 1;
    while width < n {
        for start in (0..n).step_by(2 * width) {
            let mid = (start + width).min(n);
            let end = (start + 2 * width).min(n);
            let (mut i, mut j, mut k) = (start, mid, start);
            while i < mid && j < end {
                if src[j] < src[i] {
                    dst[k] = src[j];
                    inversions += (mid - i) as u64;
                    j += 1;
                } else {
                    dst[k] = src[i];
                    i += 1;
                }
                k += 1;
            }
            dst[k..k + (mid - i)].copy_from_slice(&src[i..mid]);
            k += mid - i;
            dst[k..end].copy_from_slice(&src[j..end]);
        }
        std::mem::swap(&mut src, &mut dst);
        width *= 2;
    }
    *v = src;
    inversions
}

/// Concordance counts of the bivariate sample `(u_i, v_i)`.
pub fn concordance_counts(u: &[f64], v: &[f64]) -> ConcordanceCounts {
    assert_eq!(u.len(), v.len(), "columns must have equal length");
    let n = u.len() as u64;
    let pairs = n * n.saturating_sub(1) / 2;
    let mut joint: Vec<(f64, f64)> = u.iter().copied().zip(v.iter().copied()).collect();
    joint.par_sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let tied_u = tied_pairs(&joint.iter().map(|p| p.0).collect::<Vec<_>>());
    let tied_joint = tied_pairs(&joint);
    let mut vs: Vec<f64> = joint.iter().map(|p| p.1).collect();
    let discordant = count_inversions(&mut vs);
    let tied_v = tied_pairs(&vs);
    let concordant = pairs + tied_joint - tied_u - tied_v - discordant;
    ConcordanceCounts {
        concordant,
        discordant,
        pairs,
    }
}
