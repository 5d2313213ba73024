//! Power weights w(x) = max(|x|, h/2)^α, brute-force A_p constants and
//! weighted L^p norms.

use alloc::vec::Vec;
#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::field::{GridSpec, ScalarField};

/// Power weight |x|^α regularized at half a cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSpec {
    pub alpha: f64,
}

impl WeightSpec {
    pub fn new(alpha: f64) -> Self {
        Self { alpha }
    }

    /// Samples of the weight on the grid.
    pub fn field(&self, grid: &GridSpec) -> ScalarField {
        let floor = 0.5 * grid.spacing();
        ScalarField::from_parts(
            *grid,
            (0..grid.len())
                .map(|i| {
                    let x = grid.point(i);
                    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt().max(floor);
                    if self.alpha == 0.0 {
                        1.0
                    } else {
                        r.powf(self.alpha)
                    }
                })
                .collect(),
        )
    }

    /// Whether |x|^α ∈ A_p(ℝⁿ), i.e. −n < α < n(p−1).
    pub fn admissible(&self, n: usize, p: f64) -> bool {
        let n = n as f64;
        self.alpha > -n && self.alpha < n * (p - 1.0)
    }
}

/// (Σ|f|^p w h^n)^{1/p}.
pub fn weighted_lp_norm(f: &ScalarField, w: &WeightSpec, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 || p.is_infinite() {
        return Err(Error::InvalidExponent(p));
    }
    let weights = w.field(f.grid());
    let s: f64 = f
        .values()
        .iter()
        .zip(weights.values())
        .map(|(v, w)| if p == 2.0 { v * v * w } else { v.abs().powf(p) * w })
        .sum();
    Ok((s * f.grid().cell_volume()).powf(1.0 / p))
}

/// Exponent of w^{−q/p}, which lies in A_q when w ∈ A_p.
pub fn dual_weight(w: &WeightSpec, p: f64) -> WeightSpec {
    let q = p / (p - 1.0);
    WeightSpec { alpha: -w.alpha * q / p }
}

/// Balls used to estimate an A_p constant: lattice centers on a coarse
/// sublattice through the origin, radii 2h, 4h, …, L/4, balls kept inside the box.
#[derive(Debug, Clone, PartialEq)]
pub struct BallFamily {
    pub center_stride: usize,
    pub radii: Vec<f64>,
}

impl BallFamily {
    pub fn default_for(grid: &GridSpec) -> Self {
        Self::with_stride(grid, (grid.size() / 32).max(1))
    }

    pub fn with_stride(grid: &GridSpec, center_stride: usize) -> Self {
        let h = grid.spacing();
        let mut radii = Vec::new();
        let mut r = 2.0 * h;
        while r <= 0.25 * grid.length() * (1.0 + 1e-12) {
            radii.push(r);
            r *= 2.0;
        }
        Self { center_stride: center_stride.max(1), radii }
    }
}

/// Largest A_p functional over a ball family, with its maximizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApEstimate {
    pub value: f64,
    pub center: [f64; 3],
    pub radius: f64,
}

/// sup_B (⨍_B w)(⨍_B w^{−1/(p−1)})^{p−1} over the family, averaging lattice samples.
pub fn ap_constant(w: &WeightSpec, p: f64, grid: &GridSpec, family: &BallFamily) -> Result<ApEstimate> {
    if !(p > 1.0) || p.is_infinite() {
        return Err(Error::InvalidExponent(p));
    }
    let n = grid.dim();
    let size = grid.size() as i64;
    let h = grid.spacing();
    let weights = w.field(grid);
    let dual_exp = -1.0 / (p - 1.0);
    let dual: Vec<f64> = weights
        .values()
        .iter()
        .map(|&v| if w.alpha == 0.0 { 1.0 } else { v.powf(dual_exp) })
        .collect();
    let mut best = ApEstimate { value: 0.0, center: [0.0; 3], radius: 0.0 };
    let origin = (size / 2) as usize;
    let stride = family.center_stride;
    for &radius in &family.radii {
        let reach = (radius / h + 1e-9).floor() as i64;
        let mut offsets: Vec<[i64; 3]> = Vec::new();
        let span = |active: bool| if active { -reach..=reach } else { 0..=0 };
        for a in span(true) {
            for b in span(n > 1) {
                for c in span(n > 2) {
                    if ((a * a + b * b + c * c) as f64) * h * h <= radius * radius * (1.0 + 1e-12) {
                        offsets.push([a, b, c]);
                    }
                }
            }
        }
        let count = offsets.len() as f64;
        let lo = reach;
        let hi = size - 1 - reach;
        let axis_centres: Vec<i64> = (lo..=hi).filter(|k| (k - origin as i64).rem_euclid(stride as i64) == 0).collect();
        if axis_centres.is_empty() {
            continue;
        }
        let per_axis = axis_centres.len();
        let total = per_axis.pow(n as u32);
        for c in 0..total {
            let mut centre = [0i64; 3];
            let mut rest = c;
            for a in 0..n {
                centre[a] = axis_centres[rest % per_axis];
                rest /= per_axis;
            }
            let (mut sw, mut sd) = (0.0, 0.0);
            for o in &offsets {
                let idx = [centre[0] + o[0], centre[1] + o[1], centre[2] + o[2]];
                let i = grid.ravel_wrapped(&idx);
                sw += weights.values()[i];
                sd += dual[i];
            }
            let value = (sw / count) * (sd / count).powf(p - 1.0);
            if value > best.value {
                let mut x = [0.0; 3];
                for a in 0..n {
                    x[a] = grid.coord(centre[a] as usize);
                }
                best = ApEstimate { value, center: x, radius };
            }
        }
    }
    Ok(best)
}

/// A_p constants under successive grid refinement, for detecting weights
/// outside A_p.
#[derive(Debug, Clone, PartialEq)]
pub struct ApProbe {
    pub sizes: Vec<usize>,
    pub values: Vec<f64>,
    /// Smallest ratio between consecutive refinements.
    pub min_growth: f64,
    /// Growth of at least 1.5× at every refinement.
    pub diverges: bool,
}

/// Evaluates `ap_constant` on grids of the given sizes with a fixed box.
pub fn ap_divergence_probe(w: &WeightSpec, p: f64, n: usize, length: f64, sizes: &[usize]) -> Result<ApProbe> {
    let mut values = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let grid = GridSpec::new(n, size, length)?;
        values.push(ap_constant(w, p, &grid, &BallFamily::with_stride(&grid, (size / 16).max(1)))?.value);
    }
    let min_growth = values.windows(2).map(|v| v[1] / v[0]).fold(f64::INFINITY, f64::min);
    Ok(ApProbe { sizes: sizes.to_vec(), values, min_growth, diverges: min_growth >= 1.5 })
}
