//! Hardy–Littlewood and spherical maximal functions over scale nodes, and
//! the representation of sphere means through ball means and η.

use alloc::vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::averaging::{check_scale, KernelSpec, KernelSpectrum, ScaleGrid};
use crate::error::Result;
use crate::field::{GridSpec, ScalarField};
use crate::special::{ball_symbol, sphere_symbol};
use crate::spectral::{inverse_transform, norm3, transform};

fn sup_over_nodes(f: &ScalarField, scales: &ScaleGrid, node: impl Fn(f64) -> Result<ScalarField>) -> Result<ScalarField> {
    let mut acc = vec![0.0f64; f.grid().len()];
    for &t in scales.nodes() {
        let g = node(t)?;
        for (a, v) in acc.iter_mut().zip(g.values()) {
            *a = a.max(v.abs());
        }
    }
    Ok(ScalarField::from_parts(*f.grid(), acc))
}

/// Sub-cells per axis when measuring how much of a cell lies in the ball.
const BALL_SUBCELLS: usize = 4;

/// Density of a nonnegative lattice ball average of radius t: each cell
/// weighted by the fraction of its sub-cell centers inside B(0, t),
/// normalized to unit mass.
fn positive_ball_kernel(grid: &GridSpec, t: f64) -> ScalarField {
    let n = grid.dim();
    let h = grid.spacing();
    let reach = (t / h).ceil() as i64 + 1;
    let side = (2 * reach + 1) as usize;
    let subs = BALL_SUBCELLS.pow(n as u32);
    let origin = grid.origin_index() as i64;
    let mut values = vec![0.0; grid.len()];
    let mut total = 0.0;
    for cell in 0..side.pow(n as u32) {
        let mut k = [0i64; 3];
        let mut rest = cell;
        for a in 0..n {
            k[a] = (rest % side) as i64 - reach;
            rest /= side;
        }
        let inside = (0..subs)
            .filter(|&s| {
                let mut r2 = 0.0;
                let mut rest = s;
                for a in 0..n {
                    let u = (rest % BALL_SUBCELLS) as f64;
                    rest /= BALL_SUBCELLS;
                    let x = (k[a] as f64 + (u + 0.5) / BALL_SUBCELLS as f64 - 0.5) * h;
                    r2 += x * x;
                }
                r2 <= t * t
            })
            .count();
        if inside > 0 {
            let w = inside as f64 / subs as f64;
            let idx = grid.ravel_wrapped(&[k[0] + origin, k[1] + origin, k[2] + origin]);
            values[idx] += w;
            total += w;
        }
    }
    let scale = 1.0 / (total * grid.cell_volume());
    values.iter_mut().for_each(|v| *v *= scale);
    ScalarField::from_parts(*grid, values)
}

/// max_j of the ball average of |f| at t_j. The average uses a nonnegative
/// lattice kernel, so the operator is sublinear and dominates |ball means|.
pub fn hl_maximal(f: &ScalarField, scales: &ScaleGrid) -> Result<ScalarField> {
    let grid = *f.grid();
    let spec = transform(&f.map(f64::abs));
    sup_over_nodes(f, scales, |t| {
        check_scale(&grid, t)?;
        let kernel = transform(&positive_ball_kernel(&grid, t));
        Ok(inverse_transform(&spec.multiplied_by(kernel.coefficients())))
    })
}

/// max_j |sphere_mean(f, t_j)|.
pub fn spherical_maximal(f: &ScalarField, scales: &ScaleGrid) -> Result<ScalarField> {
    let spec = transform(f);
    let n = f.grid().dim();
    sup_over_nodes(f, scales, |t| {
        check_scale(f.grid(), t)?;
        Ok(inverse_transform(&spec.multiplied_radial(|r| sphere_symbol(n, 2.0 * PI * t * r))))
    })
}

/// max_j |f_{B(x,t_j)} − t_j·(η_{t_j} ∗ ∇f)(x)|, which equals the spherical
/// maximal function since (1/n)⨍_{B(x,t)}∇f(y)·(x−y)dy = t·(η_t ∗ ∇f)(x).
pub fn maximal_representation(f: &ScalarField, scales: &ScaleGrid) -> Result<ScalarField> {
    let grid = *f.grid();
    let n = grid.dim();
    let spec = transform(f);
    sup_over_nodes(f, scales, |t| {
        let eta = KernelSpectrum::new(&KernelSpec::eta(), &grid, t)?.gradient_multiplier();
        let m: alloc::vec::Vec<Complex64> = (0..grid.len())
            .map(|i| {
                let r = norm3(&grid.frequency(i));
                Complex64::new(ball_symbol(n, 2.0 * PI * t * r), 0.0) - eta[i] * t
            })
            .collect();
        Ok(inverse_transform(&spec.multiplied_by(&m)))
    })
}
