use depmark::estimate::{collision_hat, compute_ranks, concordance_counts, nearest_neighbors};
use depmark::exact::relative_effect;
use depmark::markov::{markov_cdf, markov_cdf_bounds};
use depmark::suite::verification_models;
use depmark::{Atom, Bound, MixedLaw1D, Piece};
use proptest::prelude::*;

fn quarter(k: i32) -> f64 {
    k as f64 * 0.25
}

prop_compose! {
    fn law()(
        atom_slots in prop::collection::btree_set(-12i32..12, 0..3),
        pieces in prop::collection::vec((-12i32..12, 1i32..8), 1..4),
        weights in prop::collection::vec(1u32..9, 6),
    ) -> MixedLaw1D {
        let k = atom_slots.len() + pieces.len();
        let total: f64 = weights[..k].iter().map(|&w| w as f64).sum();
        let mut w = weights.iter().map(|&w| w as f64 / total);
        let atoms = atom_slots.iter().map(|&s| Atom { location: quarter(s), mass: w.next().unwrap() }).collect();
        let pieces = pieces
            .iter()
            .map(|&(a, len)| Piece { lower: quarter(a), upper: quarter(a + len), mass: w.next().unwrap() })
            .collect();
        MixedLaw1D::new(atoms, pieces).unwrap()
    }
}

fn grid() -> impl Iterator<Item = f64> {
    (0..1000).map(|i| -5.0 + 10.0 * i as f64 / 999.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cdf_is_a_distribution_function(l in law()) {
        let mut prev = 0.0;
        for y in grid() {
            let f = l.cdf(y);
            prop_assert!(f >= prev - 1e-15 && (0.0..=1.0).contains(&f));
            prev = f;
        }
        prop_assert_eq!(l.cdf(-1e9), 0.0);
        prop_assert!((l.cdf(1e9) - 1.0).abs() < 1e-12);
        for b in l.breakpoints() {
            prop_assert!((l.cdf(b + 1e-12) - l.cdf(b)).abs() < 1e-9);
        }
    }

    #[test]
    fn quantile_inverts_cdf_at_continuity_points(l in law()) {
        for y in grid() {
            // level 0 maps to the bottom of the support by convention
            if l.mass_at(y) > 0.0 || l.cdf(y) == 0.0 {
                continue;
            }
            let q = l.quantile(l.cdf(y)).unwrap();
            prop_assert!(q <= y + 1e-9, "q({}) = {} > {}", l.cdf(y), q, y);
        }
        prop_assert!(l.quantile(1.5).is_err());
    }

    #[test]
    fn relative_effect_is_antisymmetric(p in law(), q in law()) {
        prop_assert!((relative_effect(&p, &q) + relative_effect(&q, &p) - 1.0).abs() < 1e-12);
        prop_assert!((relative_effect(&p, &p) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rank_counts(y in prop::collection::vec(-5i32..5, 2..60)) {
        let y: Vec<f64> = y.into_iter().map(f64::from).collect();
        let r = compute_ranks(&y);
        let n = y.len() as u64;
        for (i, &v) in y.iter().enumerate() {
            let mult = y.iter().filter(|&&w| w == v).count() as u64;
            prop_assert_eq!(r.r[i] + r.l[i], n + mult);
            prop_assert_eq!(r.r[i], y.iter().filter(|&&w| w <= v).count() as u64);
        }
    }

    #[test]
    fn nearest_neighbour_is_nearest(
        p in 1usize..4,
        raw in prop::collection::vec(-6i32..6, 6..150),
        seed in any::<u64>(),
    ) {
        let n = raw.len() / p;
        prop_assume!(n >= 2);
        let x: Vec<f64> = raw[..n * p].iter().map(|&v| v as f64 * 0.5).collect();
        let map = nearest_neighbors(&x, p, seed);
        let d = |i: usize, j: usize| (0..p).map(|k| (x[i * p + k] - x[j * p + k]).powi(2)).sum::<f64>();
        for i in 0..n {
            let j = map.neighbors[i];
            prop_assert_ne!(i, j);
            let best = (0..n).filter(|&k| k != i).map(|k| d(i, k)).fold(f64::INFINITY, f64::min);
            prop_assert_eq!(d(i, j), best);
        }
    }

    #[test]
    fn concordance_matches_brute_force(
        pairs in prop::collection::vec((-4i32..4, -4i32..4), 2..120),
    ) {
        let (u, v): (Vec<f64>, Vec<f64>) = pairs.iter().map(|&(a, b)| (a as f64, b as f64)).unzip();
        let k = concordance_counts(&u, &v);
        let (mut c, mut d) = (0u64, 0u64);
        for i in 0..u.len() {
            for j in i + 1..u.len() {
                let s = (u[i] - u[j]) * (v[i] - v[j]);
                if s > 0.0 { c += 1 } else if s < 0.0 { d += 1 }
            }
        }
        prop_assert_eq!((k.concordant, k.discordant), (c, d));
    }

    #[test]
    fn collision_matches_brute_force(raw in prop::collection::vec(0i32..5, 4..100), p in 1usize..3) {
        let n = raw.len() / p;
        prop_assume!(n >= 2);
        let x: Vec<f64> = raw[..n * p].iter().map(|&v| v as f64).collect();
        let mut same = 0u64;
        for i in 0..n {
            for j in 0..n {
                if i != j && x[i * p..(i + 1) * p] == x[j * p..(j + 1) * p] {
                    same += 1;
                }
            }
        }
        let expected = same as f64 / (n * (n - 1)) as f64;
        prop_assert_eq!(collision_hat(&x, p).unwrap(), expected);
    }
}

#[test]
fn markov_cdf_is_symmetric_with_the_right_margins() {
    for (name, m) in verification_models() {
        let marginal = m.marginal_law_y();
        let (lo, hi) = marginal.support();
        let ys: Vec<f64> = (0..=24)
            .map(|i| lo - 0.1 + (hi - lo + 0.2) * i as f64 / 24.0)
            .collect();
        for &a in &ys {
            let margin = markov_cdf_bounds(&m, Bound::le(a), Bound::everything());
            assert!(
                (margin - marginal.cdf(a)).abs() <= 1e-10,
                "{name}: margin at {a}"
            );
            for &b in &ys {
                assert!(
                    (markov_cdf(&m, a, b) - markov_cdf(&m, b, a)).abs() <= 1e-14,
                    "{name}"
                );
            }
        }
    }
}
