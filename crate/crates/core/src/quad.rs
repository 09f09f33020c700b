//! Gauss–Legendre rules on breakpoint-aligned cells.
//!
//! Every integrand in this crate is a low-degree polynomial between known
//! breakpoints, so a five-point rule per cell is exact up to rounding.

use crate::model::Affine;

const NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Five-point rule on `[a, b]`; exact for polynomials of degree ≤ 9.
pub(crate) fn gauss<F: FnMut(f64) -> f64>(a: f64, b: f64, mut f: F) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut s = 0.0;
    for (t, w) in NODES.iter().zip(WEIGHTS) {
        s += w * f(mid + half * t);
    }
    s * half
}

/// Sorted, deduplicated points of `[a, b]`: both ends plus every candidate strictly inside.
pub(crate) fn cell_breaks<I: IntoIterator<Item = f64>>(a: f64, b: f64, candidates: I) -> Vec<f64> {
    let mut out = vec![a, b];
    out.extend(
        candidates
            .into_iter()
            .filter(|&t| t.is_finite() && t > a && t < b),
    );
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Integral over `[breaks[0], breaks[last]]`, one rule per cell.
pub(crate) fn integrate_cells<F: FnMut(f64) -> f64>(breaks: &[f64], mut f: F) -> f64 {
    breaks.windows(2).map(|w| gauss(w[0], w[1], &mut f)).sum()
}

/// `∫_{a1}^{b1} ∫_{a2}^{b2} f(x1, x2) dx2 dx1` where `f` is polynomial off
/// the lines `x2 = g(x1)` for `g` in `lines` and off the vertical lines
/// `x1 = t` for `t` in `outer`.
pub(crate) fn integrate_2d<F: FnMut(f64, f64) -> f64>(
    (a1, b1): (f64, f64),
    (a2, b2): (f64, f64),
    outer: &[f64],
    lines: &[Affine],
    mut f: F,
) -> f64 {
    let mut candidates: Vec<f64> = outer.to_vec();
    for (i, g) in lines.iter().enumerate() {
        if g.beta != 0.0 {
            candidates.push((a2 - g.alpha) / g.beta);
            candidates.push((b2 - g.alpha) / g.beta);
        }
        for h in &lines[i + 1..] {
            if g.beta != h.beta {
                candidates.push((h.alpha - g.alpha) / (g.beta - h.beta));
            }
        }
    }
    let breaks = cell_breaks(a1, b1, candidates);
    integrate_cells(&breaks, |x1| {
        let inner = cell_breaks(a2, b2, lines.iter().map(|g| g.eval(x1)));
        integrate_cells(&inner, |x2| f(x1, x2))
    })
}
