use depmark::characterize::classify;
use depmark::exact::{
    lambda_exact, lambda_via_markov, r2_exact, r2_via_markov, xi_exact, xi_via_markov,
    EXACT_RANGE_EPS,
};
use depmark::markov::transform_model;
use depmark::suite::{random_suite, verification_models, SuiteKind};
use depmark::{example_model, Error, ExampleId};

fn lambda_or_none(r: depmark::Result<depmark::exact::MeasureReport>) -> Option<f64> {
    match r {
        Ok(r) => r.lambda,
        Err(Error::Degenerate(_)) => None,
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn definition_and_markov_routes_agree() {
    let (mut dxi, mut dr2, mut dl) = (0.0f64, 0.0f64, 0.0f64);
    for (name, m) in verification_models() {
        let (a, b) = (
            xi_exact(&m).unwrap().xi.unwrap(),
            xi_via_markov(&m).unwrap().xi.unwrap(),
        );
        dxi = dxi.max((a - b).abs());
        let (c, d) = (
            r2_exact(&m).unwrap().r2.unwrap(),
            r2_via_markov(&m).unwrap().r2.unwrap(),
        );
        dr2 = dr2.max((c - d).abs());
        let (e, f) = (
            lambda_or_none(lambda_exact(&m)),
            lambda_or_none(lambda_via_markov(&m)),
        );
        assert_eq!(e.is_some(), f.is_some(), "{name}");
        if let (Some(e), Some(f)) = (e, f) {
            dl = dl.max((e - f).abs());
        }
        for v in [Some(a), Some(b), Some(c), Some(d), e, f]
            .into_iter()
            .flatten()
        {
            assert!(
                (-EXACT_RANGE_EPS..=1.0 + EXACT_RANGE_EPS).contains(&v),
                "{name}: {v}"
            );
        }
    }
    assert!(dxi <= 1e-8, "xi gap {dxi}");
    assert!(dr2 <= 1e-8, "r2 gap {dr2}");
    assert!(dl <= 1e-6, "lambda gap {dl}");
}

#[test]
fn zero_sets_are_nested() {
    for s in random_suite() {
        let xi = xi_exact(&s.model).unwrap().xi.unwrap();
        if xi.abs() <= 1e-9 {
            assert!(
                r2_exact(&s.model).unwrap().r2.unwrap().abs() <= 1e-9,
                "{}",
                s.name
            );
            assert!(
                lambda_or_none(lambda_exact(&s.model)).unwrap().abs() <= 1e-9,
                "{}",
                s.name
            );
        }
    }
}

#[test]
fn structured_suite_members_hit_their_extremes() {
    for s in random_suite() {
        let xi = xi_exact(&s.model).unwrap().xi.unwrap();
        let lambda = lambda_or_none(lambda_exact(&s.model)).unwrap();
        match s.kind {
            SuiteKind::Independent => {
                assert!(xi.abs() < 1e-12 && lambda.abs() < 1e-12, "{}", s.name)
            }
            SuiteKind::PerfectDependence => {
                assert!(
                    (xi - 1.0).abs() < 1e-12 && (lambda - 1.0).abs() < 1e-12,
                    "{}",
                    s.name
                )
            }
            SuiteKind::Separated => assert!((lambda - 1.0).abs() < 1e-12, "{}", s.name),
            SuiteKind::SymmetricSpread => {
                assert!(lambda.abs() < 1e-12, "{}", s.name);
                assert!(
                    r2_exact(&s.model).unwrap().r2.unwrap().abs() < 1e-12,
                    "{}",
                    s.name
                );
            }
            _ => {}
        }
    }
}

#[test]
fn classify_routes_agree_everywhere() {
    for (name, m) in verification_models() {
        let r = classify(&m).unwrap();
        assert!(r.routes_agree(), "{name}: {:?}", r.notes);
        let [ind, unc, bal, _, _] = r.flags();
        if ind {
            assert!(unc && bal, "{name}");
        }
    }
}

#[test]
fn converse_witnesses() {
    let flags = |id| classify(&example_model(id)).unwrap().flags();
    // independent, uncorrelated, balanced, comonotone, separated
    assert_eq!(flags(ExampleId::Ex2_4), [false, true, true, false, false]);
    let f = flags(ExampleId::Ex2_5);
    assert!(!f[0] && f[1] && !f[2]);
    let f = flags(ExampleId::Ex2_6Sq);
    assert!(!f[0] && !f[1] && f[2]);
    let f = flags(ExampleId::Ex3_4);
    assert!(f[3] && !f[4]);
}

#[test]
fn transform_invariance_for_atom_free_margins() {
    for id in ExampleId::ALL {
        let m = example_model(id);
        if !m.marginal_law_y().atoms().is_empty() {
            continue;
        }
        let t = transform_model(&m).unwrap();
        let l = |m| lambda_or_none(lambda_exact(m));
        if let (Some(a), Some(b)) = (l(&m), l(&t)) {
            assert!((a - b).abs() <= 1e-8, "{id}");
        }
        let (a, b) = (
            xi_exact(&m).unwrap().xi.unwrap(),
            xi_exact(&t).unwrap().xi.unwrap(),
        );
        assert!((a - b).abs() <= 1e-8, "{id}");
    }
}
