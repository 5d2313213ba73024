mod common;

use proptest::prelude::*;
use sqfn_core::averaging::{Omega, ScaleGrid};
use sqfn_core::field::{lp_norm, sample};
use sqfn_core::spectral::{gradient, half_laplacian};
use sqfn_core::special::unit_ball_volume;
use sqfn_core::squarefn::{
    default_angular, family, mu_omega, mu_omega_vector, sato_sigma, scale_integrate, second_difference_family,
    square_d_fullspace, square_s, square_s_kernel, square_s_tilde, square_t, square_t_1d, square_t_kernel,
    square_t_tilde, square_w, FamilyKind,
};
use sqfn_core::{Generator, GridSpec, Result, ScalarField, ScaleFamily};

use common::{bandlimited, integrate, max_abs_diff, quadratic, rel_max, smooth_fields};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[test]
fn scale_integrate_examples() {
    let g = GridSpec::new(1, 64, 1.0).unwrap();
    let s = ScaleGrid::new(&g, 0.1, 0.2, 1).unwrap();
    let one = ScaleFamily::new(s.clone(), vec![ScalarField::constant(g, 1.0)]).unwrap();
    assert!((scale_integrate(&one).values()[0] - std::f64::consts::LN_2.sqrt()).abs() < 1e-15);
    let zero = ScaleFamily::new(s, vec![ScalarField::zeros(g)]).unwrap();
    assert_eq!(scale_integrate(&zero).max_abs(), 0.0);
}

#[test]
fn cosine_square_function_matches_reduced_integral() {
    // For f = cos 2πx the sphere deviation is cos(2πx)(1 − cos 2πt)/t, so
    // Tf = |cos 2πx|·2π·√I₀ with I₀ = ∫₀^∞ (1 − cos u)²/u³ du.
    let g1 = |u: f64| if u < 1e-3 { u / 4.0 - u * u * u / 48.0 } else { (1.0 - u.cos()).powi(2) / u.powi(3) };
    let big = 4000.0;
    let i0 = integrate(g1, 0.0, big, 40_000) + 0.75 / (big * big);
    let g = GridSpec::new(1, 1024, 16.0).unwrap();
    let f = sample(&g, &Generator::PlaneWave { m: [16, 0, 0] }).unwrap();
    let scales = ScaleGrid::new(&g, g.spacing(), 4.0, 8).unwrap();
    let t = square_t(&f, &scales).unwrap();
    let expected = f.map(|v| v.abs() * TWO_PI * i0.sqrt());
    assert!(rel_max(&t, &expected) <= 0.02, "{}", rel_max(&t, &expected));
}

#[test]
fn kernel_paths_match_mean_paths() {
    for (n, size) in [(1, 512), (2, 128)] {
        let g = GridSpec::new(n, size, 8.0).unwrap();
        let scales = ScaleGrid::default_for(&g);
        for f in smooth_fields(&g) {
            let t = square_t(&f, &scales).unwrap();
            let s = square_s(&f, &scales).unwrap();
            assert!(rel_max(&square_t_kernel(&f, &scales).unwrap(), &t) <= 1e-3);
            assert!(rel_max(&square_s_kernel(&f, &scales).unwrap(), &s) <= 1e-3);
        }
    }
}

#[test]
fn s_is_dominated_by_t_plus_w() {
    let g = GridSpec::new(2, 128, 8.0).unwrap();
    let scales = ScaleGrid::default_for(&g);
    for f in smooth_fields(&g) {
        let s = square_s_kernel(&f, &scales).unwrap();
        let t = square_t_kernel(&f, &scales).unwrap();
        let w = square_w(&f, &scales).unwrap();
        for i in 0..g.len() {
            assert!(s.values()[i] <= t.values()[i] + w.values()[i] + 1e-8);
        }
    }
}

#[test]
fn psi_family_is_phi_minus_eta() {
    let g = GridSpec::new(2, 128, 8.0).unwrap();
    let scales = ScaleGrid::default_for(&g);
    let f = &smooth_fields(&g)[0];
    let psi = family(FamilyKind::PsiGradient, f, &scales).unwrap();
    let phi = family(FamilyKind::PhiGradient, f, &scales).unwrap();
    let eta = family(FamilyKind::EtaGradient, f, &scales).unwrap();
    for ((p, a), b) in psi.fields().iter().zip(phi.fields()).zip(eta.fields()) {
        assert!(max_abs_diff(p, &a.sub(b).unwrap()) <= 1e-10 * p.max_abs().max(1e-300));
    }
}

#[test]
fn quadratic_integrand_ratio_at_center() {
    let g = GridSpec::new(2, 256, 8.0).unwrap();
    let f = quadratic(&g);
    let h = g.spacing();
    let scales = ScaleGrid::new(&g, h, 4.0 * h, 2).unwrap();
    let s = family(FamilyKind::BallDeviation, &f, &scales).unwrap();
    let t = family(FamilyKind::SphereDeviation, &f, &scales).unwrap();
    let o = g.origin();
    for (a, b) in s.fields().iter().zip(t.fields()) {
        let ratio = (a.values()[o] / b.values()[o]).powi(2);
        assert!((ratio - 0.25).abs() <= 1e-3 * 0.25, "{ratio}");
    }
}

#[test]
fn riesz_route_reproduces_t() {
    let g = GridSpec::new(2, 128, 8.0).unwrap();
    let scales = ScaleGrid::default_for(&g);
    for f in smooth_fields(&g) {
        let half = half_laplacian(&f);
        assert!(rel_max(&square_t_tilde(&half, &scales).unwrap(), &square_t(&f, &scales).unwrap()) <= 1e-3);
        assert!(rel_max(&square_s_tilde(&half, &scales).unwrap(), &square_s(&f, &scales).unwrap()) <= 1e-3);
    }
    let zero = ScalarField::zeros(g);
    assert_eq!(square_t_tilde(&zero, &scales).unwrap().max_abs(), 0.0);
}

#[test]
fn tilde_isometry_ratio_is_field_independent() {
    let g = GridSpec::new(2, 128, 8.0).unwrap();
    let scales = ScaleGrid::new(&g, g.spacing(), 2.0, 8).unwrap();
    let ratios: Vec<f64> = (0..5)
        .map(|seed| {
            let f = sample(&g, &Generator::RandomBandlimited { k: 16, seed }).unwrap();
            lp_norm(&square_t_tilde(&f, &scales).unwrap(), 2.0).unwrap() / lp_norm(&f, 2.0).unwrap()
        })
        .collect();
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    assert!(hi / lo - 1.0 <= 0.01, "{ratios:?}");
}

#[test]
fn marcinkiewicz_sign_kernel_is_a_second_difference() {
    // ∫_{|y|≤t} sign(y) f′(x − y) dy = 2f(x) − f(x + t) − f(x − t).
    let g = GridSpec::new(1, 1024, 8.0).unwrap();
    let scales = ScaleGrid::default_for(&g);
    for f in smooth_fields(&g) {
        let df = gradient(&f).component(0).clone();
        let mu = mu_omega(&Omega::Sign, &df, &scales).unwrap();
        let t1 = square_t_1d(&f, &scales).unwrap();
        assert!(rel_max(&mu, &t1) <= 1e-3, "{}", rel_max(&mu, &t1));
        assert!(rel_max(&mu, &square_t(&f, &scales).unwrap().scaled(2.0)) <= 1e-3);
    }
}

#[test]
fn vector_marcinkiewicz_is_scaled_t() {
    for (n, size) in [(1, 512), (2, 128)] {
        let g = GridSpec::new(n, size, 8.0).unwrap();
        let scales = ScaleGrid::default_for(&g);
        let area = n as f64 * unit_ball_volume(n);
        for f in smooth_fields(&g) {
            let mu = mu_omega_vector(&gradient(&f), &scales).unwrap();
            let t = square_t(&f, &scales).unwrap().scaled(area);
            assert!(rel_max(&mu, &t) <= 1e-3, "n={n} {}", rel_max(&mu, &t));
        }
    }
}

#[test]
fn sato_sigma_gates_and_boundedness() {
    let g = GridSpec::new(2, 128, 8.0).unwrap();
    let scales = ScaleGrid::default_for(&g);
    assert!(sato_sigma(&Omega::Constant(1.0), 0.5, &smooth_fields(&g)[0], &scales).is_err());
    assert!(sato_sigma(&Omega::Sign, 0.0, &smooth_fields(&g)[0], &scales).is_err());
    let c = ScalarField::constant(g, 2.0);
    assert!(sato_sigma(&Omega::Quadrupole, 0.5, &c, &scales).unwrap().max_abs() <= 1e-12);
    let ratios: Vec<f64> = smooth_fields(&g)
        .iter()
        .map(|f| lp_norm(&sato_sigma(&Omega::Coordinate(0), 0.5, f, &scales).unwrap(), 2.0).unwrap() / lp_norm(f, 2.0).unwrap())
        .collect();
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    assert!(hi / lo <= 2.0, "{ratios:?}");
}

#[test]
fn second_difference_examples() {
    let g = GridSpec::new(1, 256, 4.0).unwrap();
    let scales = ScaleGrid::new(&g, g.spacing(), 1.0, 4).unwrap();
    let f = sample(&g, &Generator::PlaneWave { m: [4, 0, 0] }).unwrap();
    let fam = second_difference_family(&f, &scales).unwrap();
    for (&t, field) in scales.nodes().iter().zip(fam.fields()) {
        let expected = f.map(|v| 2.0 * v * ((TWO_PI * t).cos() - 1.0) / t);
        assert!(max_abs_diff(field, &expected) <= 1e-12 / t);
    }
    // An odd window has vanishing symmetric second differences at its center.
    let r = g.length() / 3.3;
    let ramp = ScalarField::from_fn(g, |x| x[0] * (-(x[0] / r).powi(8)).exp()).unwrap();
    let t1 = square_t_1d(&ramp, &scales).unwrap();
    assert!(t1.values()[g.origin()] <= 1e-12);
    assert!(square_t_1d(&quadratic(&GridSpec::new(2, 32, 8.0).unwrap()), &ScaleGrid::default_for(&GridSpec::new(2, 32, 8.0).unwrap())).is_err());
}

#[test]
fn fullspace_integral_in_one_dimension() {
    let g = GridSpec::new(1, 1024, 8.0).unwrap();
    let scales = ScaleGrid::default_for(&g);
    for f in smooth_fields(&g) {
        let d = square_d_fullspace(&f, &scales, default_angular(1)).unwrap();
        let t1 = square_t_1d(&f, &scales).unwrap().scaled(2f64.sqrt());
        assert!(rel_max(&d, &t1) <= 1e-3);
    }
}

#[test]
fn fullspace_angular_refinement() {
    let g = GridSpec::new(2, 64, 8.0).unwrap();
    let scales = ScaleGrid::new(&g, 4.0 * g.spacing(), 2.0, 4).unwrap();
    let m = default_angular(2);
    for f in smooth_fields(&g) {
        let a = lp_norm(&square_d_fullspace(&f, &scales, m).unwrap(), 2.0).unwrap();
        let b = lp_norm(&square_d_fullspace(&f, &scales, 2 * m).unwrap(), 2.0).unwrap();
        assert!((a / b - 1.0).abs() <= 2e-3);
    }
}

type Op = fn(&ScalarField, &ScaleGrid) -> Result<ScalarField>;

fn sigma(f: &ScalarField, s: &ScaleGrid) -> Result<ScalarField> {
    sato_sigma(&Omega::Coordinate(0), 0.5, f, s)
}

const OPS: [(&str, Op); 6] = [
    ("T", square_t),
    ("S", square_s),
    ("W", square_w),
    ("Ttilde", square_t_tilde),
    ("Stilde", square_s_tilde),
    ("sigma", sigma),
];

fn small_grid() -> (GridSpec, ScaleGrid) {
    let g = GridSpec::new(2, 32, 8.0).unwrap();
    let s = ScaleGrid::new(&g, g.spacing(), 2.0, 4).unwrap();
    (g, s)
}

#[test]
fn operators_vanish_on_constants() {
    let (g, s) = small_grid();
    let c = ScalarField::constant(g, -4.0);
    for (name, op) in OPS {
        assert!(op(&c, &s).unwrap().max_abs() <= 1e-12, "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn operators_are_absolutely_homogeneous(seed in 0u64..1000, c in prop::sample::select(vec![-3.0, -0.5, 2.0, 7.0])) {
        let (g, s) = small_grid();
        let f = bandlimited(&g, seed);
        for (name, op) in OPS {
            let a = op(&f.scaled(c), &s).unwrap();
            let b = op(&f, &s).unwrap().scaled(c.abs());
            prop_assert!(max_abs_diff(&a, &b) <= 1e-12 * b.max_abs(), "{}", name);
        }
    }

    #[test]
    fn operators_are_subadditive(s1 in 0u64..1000, s2 in 0u64..1000) {
        let (g, s) = small_grid();
        let (f, h) = (bandlimited(&g, s1), bandlimited(&g, s2).scaled(0.7));
        let sum = f.add(&h).unwrap();
        for (name, op) in OPS {
            let lhs = op(&sum, &s).unwrap();
            let (a, b) = (op(&f, &s).unwrap(), op(&h, &s).unwrap());
            for i in 0..g.len() {
                prop_assert!(lhs.values()[i] <= a.values()[i] + b.values()[i] + 1e-10, "{}", name);
            }
        }
    }
}
