//! Seeded statistical checks. Every seed is fixed, so outcomes are reproducible.

use depmark::characterize::{independence_stat, INDEPENDENCE_C};
use depmark::estimate::{estimate_all, MeasureSelection};
use depmark::exact::{exact_report, MeasurePath};
use depmark::markov::{markov_cdf, sample_markov};
use depmark::{example_model, DistributionModel, ExampleId, MixedLaw1D};

/// Kolmogorov distance between the empirical law of `sample` and `law`, using
/// both one-sided limits at every jump.
fn ks_distance(sample: &[f64], law: &MixedLaw1D) -> f64 {
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let mut sup: f64 = 0.0;
    let mut i = 0;
    while i < s.len() {
        let mut j = i + 1;
        while j < s.len() && s[j] == s[i] {
            j += 1;
        }
        sup = sup.max((i as f64 / n - law.cdf_left(s[i])).abs());
        sup = sup.max((j as f64 / n - law.cdf(s[i])).abs());
        i = j;
    }
    sup
}

#[test]
fn response_sample_follows_marginal() {
    let n = 10_000;
    let bound = 1.95 / (n as f64).sqrt();
    for id in ExampleId::ALL {
        let m = example_model(id);
        let law = m.marginal_law_y();
        let within = (0..100u64)
            .filter(|&seed| ks_distance(m.sample_joint(n, seed).unwrap().y(), &law) <= bound)
            .count();
        assert!(within >= 95, "{id}: {within}/100 within the bound");
    }
}

#[test]
fn markov_sample_matches_markov_cdf() {
    let n = 100_000;
    let bound = 3.0 / (n as f64).sqrt();
    for id in ExampleId::ALL {
        let m = example_model(id);
        let s = sample_markov(&m, n, 17).unwrap();
        let law = m.marginal_law_y();
        let levels: Vec<f64> = (1..=10)
            .map(|k| law.quantile(k as f64 / 11.0).unwrap())
            .collect();
        for &a in &levels {
            for &b in &levels {
                let hits = s
                    .y()
                    .iter()
                    .zip(s.y_prime())
                    .filter(|&(&y, &yp)| y <= a && yp <= b)
                    .count();
                let emp = hits as f64 / n as f64;
                let exact = markov_cdf(&m, a, b);
                assert!(
                    (emp - exact).abs() <= bound,
                    "{id} at ({a}, {b}): {emp} vs {exact}"
                );
            }
        }
    }
}

fn independent_model() -> DistributionModel {
    let u = MixedLaw1D::uniform(0.0, 1.0).unwrap();
    DistributionModel::discrete(vec![(vec![0.0], 0.5, u.clone()), (vec![1.0], 0.5, u)]).unwrap()
}

#[test]
fn independence_threshold_calibration() {
    let n = 10_000;
    let threshold = INDEPENDENCE_C / (n as f64).sqrt();
    let m = independent_model();
    let accepted = (0..100u64)
        .filter(|&seed| {
            independence_stat(&sample_markov(&m, n, seed).unwrap()).unwrap() <= threshold
        })
        .count();
    assert!(accepted >= 90, "{accepted}/100 accepted");
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

#[test]
fn estimators_converge_monotonically_in_median() {
    let sizes = [1_000, 10_000, 100_000];
    for id in ExampleId::ALL {
        let m = example_model(id);
        let exact = exact_report(&m, MeasurePath::Definition).unwrap();
        let mut errors: Vec<[f64; 3]> = Vec::new();
        for &n in &sizes {
            let mut e = [Vec::new(), Vec::new(), Vec::new()];
            for seed in 0..20u64 {
                let d = m.sample_joint(n, 1000 + seed).unwrap();
                let est = estimate_all(&d, seed, MeasureSelection::default()).unwrap();
                let pairs = [
                    (est.xi, exact.xi),
                    (est.r2, exact.r2),
                    (est.lambda, exact.lambda),
                ];
                for (k, (a, b)) in pairs.into_iter().enumerate() {
                    if let (Some(a), Some(b)) = (a, b) {
                        e[k].push((a - b).abs());
                    }
                }
            }
            errors.push(e.map(|v| if v.is_empty() { 0.0 } else { median(v) }));
        }
        for k in 0..3 {
            for w in errors.windows(2) {
                assert!(
                    w[1][k] <= w[0][k],
                    "{id} measure {k}: {:?}",
                    errors.iter().map(|e| e[k]).collect::<Vec<_>>()
                );
            }
        }
    }
}
