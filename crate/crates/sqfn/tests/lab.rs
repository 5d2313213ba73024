use sqfn::corpus::{bandlimited_corpus, parse_generator, smooth_corpus};
use sqfn::lab::{
    closed_form_constants_1d, parts_identity_at, parts_probe_points, run_suite, verify_mollifier_domination,
    verify_pointwise_inequality, verify_polarization, verify_representation, Suite, SuiteConfig,
};
use sqfn_core::{GridSpec, ScalarField, ScaleGrid};

fn integrate(g: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    // Composite Simpson rule.
    let m = 2 * panels;
    let step = (b - a) / m as f64;
    let mut total = g(a) + g(b);
    for i in 1..m {
        total += if i % 2 == 1 { 4.0 } else { 2.0 } * g(a + i as f64 * step);
    }
    total * step / 3.0
}

#[test]
fn closed_form_constants_match_independent_quadrature() {
    // With a = 2πs, ds/s = da/a; h_φ = −(1 − cos a)/a, h_η = −(sin a − a cos a)/a².
    let phi = |a: f64| if a < 1e-4 { -a / 2.0 } else { -(1.0 - a.cos()) / a };
    let eta = |a: f64| if a < 1e-4 { -a / 3.0 } else { -(a.sin() - a * a.cos()) / (a * a) };
    let big = 2.0 * std::f64::consts::PI * 4000.0;
    let q1 = integrate(|a| if a == 0.0 { 0.0 } else { phi(a).powi(2) / a }, 0.0, big, 400_000) + 0.75 / (big * big);
    let q2 = integrate(|a| if a == 0.0 { 0.0 } else { (phi(a) - eta(a)).powi(2) / a }, 0.0, big, 400_000)
        + 0.5 / (big * big);
    let (c1, c2) = closed_form_constants_1d();
    assert!((c1 / q1 - 1.0).abs() <= 1e-5, "{c1} {q1}");
    assert!((c2 / q2 - 1.0).abs() <= 1e-5, "{c2} {q2}");
}

#[test]
fn runners_are_exact_on_constants() {
    let g = GridSpec::new(2, 64, 8.0).unwrap();
    let c = ScalarField::constant(g, 3.0);
    let scales = ScaleGrid::default_for(&g);
    let r = verify_representation(&c, 1.0).unwrap();
    assert!(r.sphere <= 1e-14 && r.ball <= 1e-14);
    let p = verify_pointwise_inequality(&c, &scales).unwrap();
    assert_eq!((p.stated_violations, p.sqrt_violations), (0, 0));
    for r in parts_identity_at(&c, &parts_probe_points(&g), 0.5, 1.0, 8).unwrap() {
        assert!(r.lhs.abs() <= 1e-20 && r.residual <= 1e-14);
    }
    let m = verify_mollifier_domination(&c, 4.0 * g.spacing(), &scales).unwrap();
    assert_eq!(m.violations, 0);
}

#[test]
fn representation_residual_on_a_gaussian() {
    let g = GridSpec::new(2, 256, 8.0).unwrap();
    let f = smooth_corpus(8.0, 1)[0].sample(&g).unwrap();
    let r = verify_representation(&f, 0.5).unwrap();
    assert!(r.sphere <= 1e-3 && r.ball <= 1e-3, "{r:?}");
}

#[test]
fn polarization_is_bilinear() {
    let g = GridSpec::new(2, 64, 8.0).unwrap();
    let scales = ScaleGrid::new(&g, g.spacing(), 2.0, 4).unwrap();
    let fields: Vec<ScalarField> = bandlimited_corpus(&g, 7, 2).iter().map(|m| m.sample(&g).unwrap()).collect();
    let a = verify_polarization(&fields[0], &fields[1], &scales, 0.25).unwrap();
    let b = verify_polarization(&fields[0].scaled(2.0), &fields[1], &scales, 0.25).unwrap();
    assert!((b.lhs - 2.0 * a.lhs).abs() <= 1e-12 * a.lhs.abs().max(a.scale));
    assert!((b.rhs - 2.0 * a.rhs).abs() <= 1e-12 * a.rhs.abs().max(a.scale));
}

#[test]
fn mollified_square_functions_converge() {
    let g = GridSpec::new(2, 128, 8.0).unwrap();
    let scales = ScaleGrid::default_for(&g);
    let f = smooth_corpus(8.0, 1)[0].sample(&g).unwrap();
    let coarse = verify_mollifier_domination(&f, 8.0 * g.spacing(), &scales).unwrap();
    let fine = verify_mollifier_domination(&f, 4.0 * g.spacing(), &scales).unwrap();
    assert!(fine.distance_t < coarse.distance_t && fine.distance_s < coarse.distance_s);
}

#[test]
fn generator_syntax() {
    assert!(parse_generator("gaussian:1@0.5,0.25", 0).is_ok());
    assert!(parse_generator("0.5*bump:2 + -1*gaussian:0.5", 0).is_ok());
    assert!(parse_generator("spline:3", 0).is_err());
    assert!(parse_generator("gaussian:", 0).is_err());
}

#[test]
fn suite_names_round_trip() {
    for name in Suite::VERIFY.iter().copied().chain(["equivalence"]) {
        assert_eq!(Suite::parse(name).unwrap().name(), name);
    }
    assert!(Suite::parse("isometric").is_none());
}

#[test]
fn suites_are_deterministic() {
    let cfg = SuiteConfig { size: 64, ..SuiteConfig::default() };
    let a = run_suite(Suite::Maximal, &cfg).unwrap();
    let b = run_suite(Suite::Maximal, &cfg).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    assert!(a.pass);
}
