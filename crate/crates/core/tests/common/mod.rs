#![allow(dead_code)]

use sqfn_core::field::sample;
use sqfn_core::{Generator, GridSpec, ScalarField};

/// Smooth decaying test fields sized to the box (features scale with L/8).
pub fn smooth_fields(grid: &GridSpec) -> Vec<ScalarField> {
    let s = grid.length() / 8.0;
    let gens = [
        Generator::Gaussian { sigma: s, center: [0.3 * s, -0.2 * s, 0.1 * s] },
        Generator::Bump { radius: 2.0 * s, center: [0.0; 3] },
        Generator::Sum(vec![
            (1.0, Generator::Gaussian { sigma: 0.7 * s, center: [0.8 * s, 0.0, 0.0] }),
            (-0.6, Generator::Gaussian { sigma: 0.9 * s, center: [-0.6 * s, 0.4 * s, 0.0] }),
        ]),
    ];
    gens.iter().map(|g| sample(grid, g).unwrap()).collect()
}

pub fn quadratic(grid: &GridSpec) -> ScalarField {
    sample(grid, &Generator::QuadraticWindow { radius: grid.length() / 3.3 }).unwrap()
}

pub fn bandlimited(grid: &GridSpec, seed: u64) -> ScalarField {
    let k = (grid.size() / 8).max(2);
    sample(grid, &Generator::RandomBandlimited { k, seed }).unwrap()
}

pub fn max_abs_diff(a: &ScalarField, b: &ScalarField) -> f64 {
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// max|a − b| / max|b|.
pub fn rel_max(a: &ScalarField, b: &ScalarField) -> f64 {
    max_abs_diff(a, b) / b.max_abs().max(f64::MIN_POSITIVE)
}

/// Composite Gauss–Legendre quadrature of g over [a, b] in `panels` pieces.
pub fn integrate(g: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    // 8-point rule.
    const X: [f64; 4] = [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
    const W: [f64; 4] = [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];
    let step = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * step;
        let half = 0.5 * step;
        for (x, w) in X.iter().zip(W) {
            total += w * half * (g(mid - half * x) + g(mid + half * x));
        }
    }
    total
}
