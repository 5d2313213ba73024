//! Gauss–Legendre rules, cube-face rules on S^{n−1}, and local Lagrange
//! interpolation of lattice samples.

use alloc::vec::Vec;
#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::field::ScalarField;

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for i in 0..m {
        let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if m == 0 { 1.0 } else if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

/// Gauss–Legendre rule mapped to [a, b].
pub fn gauss_legendre_on(m: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(m);
    let (c, s) = (0.5 * (a + b), 0.5 * (b - a));
    x.iter().zip(&w).map(|(x, w)| (c + s * x, s * w)).collect()
}

/// Point of a cube-face rule on S^{n−1}.
#[derive(Debug, Clone, Copy)]
pub struct FaceNode {
    /// Point on the cube face (max-norm 1).
    pub face_point: [f64; 3],
    /// Unit direction face_point/|face_point|.
    pub direction: [f64; 3],
    /// Surface-measure weight.
    pub weight: f64,
}

/// Quadrature on S^{n−1} built from m×…×m Gauss–Legendre grids on each of
/// the 2n faces of the cube [−1,1]^n. Integrands that are smooth on each
/// face (such as those involving max_a|θ_a|) are integrated accurately.
/// Weights sum to nω_n.
pub fn cube_face_rule(n: usize, m: usize) -> Vec<FaceNode> {
    let (x, w) = gauss_legendre(m);
    let mut out = Vec::new();
    for axis in 0..n {
        for sign in [-1.0, 1.0] {
            let free: Vec<usize> = (0..n).filter(|&a| a != axis).collect();
            let count = m.pow(free.len() as u32);
            for idx in 0..count {
                let mut p = [0.0; 3];
                p[axis] = sign;
                let mut weight = 1.0;
                let mut rest = idx;
                for &a in &free {
                    let j = rest % m;
                    rest /= m;
                    p[a] = x[j];
                    weight *= w[j];
                }
                let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                out.push(FaceNode {
                    face_point: p,
                    direction: [p[0] / r, p[1] / r, p[2] / r],
                    weight: weight / r.powi(n as i32),
                });
            }
        }
    }
    out
}

/// Tensor-product Lagrange interpolation of periodic lattice samples with
/// `order` points per axis (even), evaluated at an arbitrary position.
pub fn interpolate(f: &ScalarField, x: &[f64; 3], order: usize) -> f64 {
    let grid = f.grid();
    let n = grid.dim();
    let h = grid.spacing();
    let half = (order / 2) as i64;
    let mut base = [0i64; 3];
    let mut weights = [[0.0f64; 16]; 3];
    for a in 0..n {
        let u = (x[a] + 0.5 * grid.length()) / h;
        let k0 = u.floor() as i64;
        base[a] = k0 - half + 1;
        for j in 0..order {
            let xj = (base[a] + j as i64) as f64;
            let mut l = 1.0;
            for i in 0..order {
                if i != j {
                    let xi = (base[a] + i as i64) as f64;
                    l *= (u - xi) / (xj - xi);
                }
            }
            weights[a][j] = l;
        }
    }
    let vals = f.values();
    let span = |a: usize| if a < n { order } else { 1 };
    let mut acc = 0.0;
    for i in 0..span(0) {
        for j in 0..span(1) {
            for k in 0..span(2) {
                let idx = [base[0] + i as i64, base[1] + j as i64, base[2] + k as i64];
                let mut w = weights[0][i];
                if n > 1 {
                    w *= weights[1][j];
                }
                if n > 2 {
                    w *= weights[2][k];
                }
                acc += w * vals[grid.ravel_wrapped(&idx)];
            }
        }
    }
    acc
}
