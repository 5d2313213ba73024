//! Square functions as discrete scale quadratures (Σ_j w_j g_{t_j}(x)²)^{1/2}.
//!
//! Every dt/t³ form is rewritten over dt/t by folding 1/t into the family,
//! e.g. T uses g_t = (f − f_{S(x,t)})/t.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::averaging::{KernelKind, KernelSpec, KernelSpectrum, Omega, ScaleGrid};
use crate::error::{Error, Result};
use crate::field::{GridSpec, ScalarField, VectorField};
use crate::special::{ball_symbol, sphere_symbol};
use crate::spectral::{inverse_transform, inverse_transform_complex, transform, Spectrum};

const TWO_PI: f64 = 2.0 * PI;

/// Per-node fields g_{t_j} on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleFamily {
    scales: ScaleGrid,
    fields: Vec<ScalarField>,
}

impl ScaleFamily {
    pub fn new(scales: ScaleGrid, fields: Vec<ScalarField>) -> Result<Self> {
        if fields.len() != scales.len() {
            return Err(Error::InvalidParameter("one field per scale node required"));
        }
        let grid = *fields.first().ok_or(Error::InvalidParameter("empty family"))?.grid();
        if fields.iter().any(|f| *f.grid() != grid) {
            return Err(Error::GridMismatch);
        }
        Ok(Self { scales, fields })
    }

    pub fn scales(&self) -> &ScaleGrid {
        &self.scales
    }

    pub fn fields(&self) -> &[ScalarField] {
        &self.fields
    }
}

/// (Σ_j w_j g_{t_j}(x)²)^{1/2}.
pub fn scale_integrate(family: &ScaleFamily) -> ScalarField {
    let grid = *family.fields[0].grid();
    let w = family.scales.weight();
    let mut acc = vec![0.0; grid.len()];
    for g in &family.fields {
        for (a, v) in acc.iter_mut().zip(g.values()) {
            *a += w * v * v;
        }
    }
    ScalarField::from_parts(grid, acc.into_iter().map(f64::sqrt).collect())
}

/// Inner families, each a Fourier multiplier applied to the input field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyKind {
    /// (f − f_{S(x,t)})/t.
    SphereDeviation,
    /// (f − f_{B(x,t)})/t.
    BallDeviation,
    /// φ_t ∗ ∇f.
    PhiGradient,
    /// ψ_t ∗ ∇f.
    PsiGradient,
    /// η_t ∗ ∇f.
    EtaGradient,
    /// φ_t ∗ Rg.
    PhiRiesz,
    /// ψ_t ∗ Rg.
    PsiRiesz,
    /// ζ_t ∗ f.
    Zeta { epsilon: f64, omega: Omega },
}

impl FamilyKind {
    /// Multiplier of the family at scale t.
    pub fn multiplier(&self, grid: &GridSpec, t: f64) -> Result<Vec<Complex64>> {
        let n = grid.dim();
        let radial = |sym: fn(usize, f64) -> f64| -> Vec<Complex64> {
            (0..grid.len())
                .map(|i| {
                    let xi = grid.frequency(i);
                    let r = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
                    Complex64::new((1.0 - sym(n, TWO_PI * t * r)) / t, 0.0)
                })
                .collect()
        };
        let kernel = |k: KernelSpec| KernelSpectrum::new(&k, grid, t);
        Ok(match *self {
            FamilyKind::SphereDeviation => {
                check_node(grid, t)?;
                radial(sphere_symbol)
            }
            FamilyKind::BallDeviation => {
                check_node(grid, t)?;
                radial(ball_symbol)
            }
            FamilyKind::PhiGradient => kernel(KernelSpec::phi())?.gradient_multiplier(),
            FamilyKind::PsiGradient => kernel(KernelSpec::psi())?.gradient_multiplier(),
            FamilyKind::EtaGradient => kernel(KernelSpec::eta())?.gradient_multiplier(),
            FamilyKind::PhiRiesz => kernel(KernelSpec::phi())?.riesz_multiplier(),
            FamilyKind::PsiRiesz => kernel(KernelSpec::psi())?.riesz_multiplier(),
            FamilyKind::Zeta { epsilon, omega } => {
                let ks = kernel(KernelSpec::zeta(epsilon, omega)?)?;
                debug_assert_eq!(ks.kind(), KernelKind::Zeta);
                ks.components()[0].clone()
            }
        })
    }
}

use crate::averaging::check_scale as check_node;

/// Precomputed per-node multipliers, reusable across input fields.
#[derive(Debug, Clone)]
pub struct MultiplierBank {
    grid: GridSpec,
    scales: ScaleGrid,
    multipliers: Vec<Vec<Complex64>>,
}

impl MultiplierBank {
    pub fn new(kind: FamilyKind, grid: &GridSpec, scales: &ScaleGrid) -> Result<Self> {
        let multipliers = scales
            .nodes()
            .iter()
            .map(|&t| kind.multiplier(grid, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { grid: *grid, scales: scales.clone(), multipliers })
    }

    pub fn scales(&self) -> &ScaleGrid {
        &self.scales
    }

    pub fn multipliers(&self) -> &[Vec<Complex64>] {
        &self.multipliers
    }

    fn check(&self, f: &ScalarField) -> Result<Spectrum> {
        if *f.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        Ok(transform(f))
    }

    /// Family fields for one input.
    pub fn family(&self, f: &ScalarField) -> Result<ScaleFamily> {
        let spec = self.check(f)?;
        let fields = self.multipliers.iter().map(|m| inverse_transform(&spec.multiplied_by(m))).collect();
        ScaleFamily::new(self.scales.clone(), fields)
    }

    /// Square function of one input without storing the family.
    pub fn apply(&self, f: &ScalarField) -> Result<ScalarField> {
        let spec = self.check(f)?;
        let w = self.scales.weight();
        let mut acc = vec![0.0; self.grid.len()];
        for m in &self.multipliers {
            let g = inverse_transform(&spec.multiplied_by(m));
            for (a, v) in acc.iter_mut().zip(g.values()) {
                *a += w * v * v;
            }
        }
        Ok(ScalarField::from_parts(self.grid, acc.into_iter().map(f64::sqrt).collect()))
    }
}

/// Family fields of `kind` for f.
pub fn family(kind: FamilyKind, f: &ScalarField, scales: &ScaleGrid) -> Result<ScaleFamily> {
    let spec = transform(f);
    let fields = scales
        .nodes()
        .iter()
        .map(|&t| Ok(inverse_transform(&spec.multiplied_by(&kind.multiplier(f.grid(), t)?))))
        .collect::<Result<Vec<_>>>()?;
    ScaleFamily::new(scales.clone(), fields)
}

/// Square function of `kind` for f, streamed over the nodes.
pub fn square(kind: FamilyKind, f: &ScalarField, scales: &ScaleGrid) -> Result<ScalarField> {
    let grid = *f.grid();
    let spec = transform(f);
    let w = scales.weight();
    let mut acc = vec![0.0; grid.len()];
    for &t in scales.nodes() {
        let g = inverse_transform(&spec.multiplied_by(&kind.multiplier(&grid, t)?));
        for (a, v) in acc.iter_mut().zip(g.values()) {
            *a += w * v * v;
        }
    }
    Ok(ScalarField::from_parts(grid, acc.into_iter().map(f64::sqrt).collect()))
}

/// Tf = (∫|f − f_{S(x,t)}|² dt/t³)^{1/2} via sphere means.
pub fn square_t(f: &ScalarField, scales: &ScaleGrid) -> Result<ScalarField> {
    square(FamilyKind::SphereDeviation, f, scales)
}

/// Tf via (∫|φ_t ∗ ∇f|² dt/t)^{1/2}.
pub fn square_t_kernel(f: &ScalarField, scales: &ScaleGrid) -> Result<ScalarField> {
    square(FamilyKind::PhiGradient, f, scales)
}

/// Sf = (∫|f − f_{B(x,t)}|² dt/t³)^{1/2} via ball means.
pub fn square_s(f: &ScalarField, scales: &ScaleGrid) -> Result<ScalarField> {
    square(FamilyKind::BallDeviation, f, scales)
}

/// Sf via (∫|ψ_t ∗ ∇f|² dt/t)^{1/2}.
pub fn square_s_kernel(f: &ScalarField, scales: &ScaleGrid) -> Result<ScalarField> {
    square(FamilyKind::PsiGradient, f, scales)
}

/// Wf = (∫|η_t ∗ ∇f|² dt/t)^{1/2}.
pub fn square_w(f: &ScalarField, scales: &ScaleGrid) -> Result<ScalarField> {
    square(FamilyKind::EtaGradient, f, scales)
}

/// T̃g = (∫|φ_t ∗ Rg|² dt/t)^{1/2}.
pub fn square_t_tilde(g: &ScalarField, scales: &ScaleGrid) -> Result<ScalarField> {
    square(FamilyKind::PhiRiesz, g, scales)
}

/// S̃g = (∫|ψ_t ∗ Rg|² dt/t)^{1/2}.
pub fn square_s_tilde(g: &ScalarField, scales: &ScaleGrid) -> Result<ScalarField> {
    square(FamilyKind::PsiRiesz, g, scales)
}

/// Sato's σ(f) = (∫|ζ_t ∗ f|² dt/t)^{1/2} with ζ = |x|^{−n+ε}Ω(x′)χ_B.
pub fn sato_sigma(omega: &Omega, epsilon: f64, f: &ScalarField, scales: &ScaleGrid) -> Result<ScalarField> {
    square(FamilyKind::Zeta { epsilon, omega: *omega }, f, scales)
}

/// Marcinkiewicz integral μ_Ω(f). Its inner integral
/// ∫_{|y|≤t} Ω(y′)|y|^{1−n} f(x−y) dy equals t·(ζ_t ∗ f) with ε = 1.
pub fn mu_omega(omega: &Omega, f: &ScalarField, scales: &ScaleGrid) -> Result<ScalarField> {
    sato_sigma(omega, 1.0, f, scales)
}

/// Vector Marcinkiewicz integral with Ω(y′) = y′ against a vector field:
/// (∫|∫_{|y|≤t} y/|y|^n · v(x−y) dy|² dt/t³)^{1/2}.
pub fn mu_omega_vector(v: &VectorField, scales: &ScaleGrid) -> Result<ScalarField> {
    let grid = *v.grid();
    let n = grid.dim();
    let specs: Vec<Spectrum> = v.components().iter().map(transform).collect();
    let w = scales.weight();
    let mut acc = vec![0.0; grid.len()];
    for &t in scales.nodes() {
        let mut sum = Spectrum::zeros(grid);
        for a in 0..n {
            let kind = FamilyKind::Zeta { epsilon: 1.0, omega: Omega::Coordinate(a) };
            let s = specs[a].multiplied_by(&kind.multiplier(&grid, t)?);
            for (x, y) in sum.coefficients_mut().iter_mut().zip(s.coefficients()) {
                *x += y;
            }
        }
        let g = inverse_transform(&sum);
        for (a, v) in acc.iter_mut().zip(g.values()) {
            *a += w * v * v;
        }
    }
    Ok(ScalarField::from_parts(grid, acc.into_iter().map(f64::sqrt).collect()))
}

/// Second-difference family (f(x+t) + f(x−t) − 2f(x))/t in one dimension,
/// with the shifted copies evaluated separately by spectral translation.
pub fn second_difference_family(f: &ScalarField, scales: &ScaleGrid) -> Result<ScaleFamily> {
    let grid = *f.grid();
    if grid.dim() != 1 {
        return Err(Error::DimensionRequired(1));
    }
    let spec = transform(f);
    let fields = scales
        .nodes()
        .iter()
        .map(|&t| {
            check_node(&grid, t)?;
            let shift = |s: f64| {
                inverse_transform_complex(&spec.multiplied(|xi| {
                    let a = TWO_PI * s * xi[0];
                    Complex64::new(a.cos(), a.sin())
                }))
            };
            let plus = shift(t);
            let minus = shift(-t);
            let values = (0..grid.len())
                .map(|i| (plus[i].re + minus[i].re - 2.0 * f.values()[i]) / t)
                .collect();
            Ok(ScalarField::from_parts(grid, values))
        })
        .collect::<Result<Vec<_>>>()?;
    ScaleFamily::new(scales.clone(), fields)
}

/// One-dimensional T(f) = (∫|f(x+t) + f(x−t) − 2f(x)|² dt/t³)^{1/2}.
pub fn square_t_1d(f: &ScalarField, scales: &ScaleGrid) -> Result<ScalarField> {
    Ok(scale_integrate(&second_difference_family(f, scales)?))
}

/// Weighted directions covering half of S^{n−1}; with the antipodal
/// symmetry of second differences the weights sum to the full area nω_n.
pub fn half_sphere_directions(n: usize, angular: usize) -> Vec<([f64; 3], f64)> {
    match n {
        1 => vec![([1.0, 0.0, 0.0], 2.0)],
        2 => (0..angular)
            .map(|k| {
                let a = PI * (k as f64 + 0.5) / angular as f64;
                ([a.cos(), a.sin(), 0.0], TWO_PI / angular as f64)
            })
            .collect(),
        _ => {
            let polar = (angular / 2).max(1);
            let mut out = Vec::new();
            for i in 0..polar {
                let th = 0.5 * PI * (i as f64 + 0.5) / polar as f64;
                for k in 0..angular {
                    let ph = TWO_PI * (k as f64 + 0.5) / angular as f64;
                    out.push(([th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()], th.sin()));
                }
            }
            let total: f64 = out.iter().map(|q| q.1).sum();
            out.iter_mut().for_each(|q| q.1 *= 4.0 * PI / total);
            out
        }
    }
}

/// Default angular resolution of [`square_d_fullspace`].
pub fn default_angular(n: usize) -> usize {
    match n {
        1 => 1,
        2 => 32,
        _ => 16,
    }
}

/// (∫_{ℝⁿ} |f(x+y) + f(x−y) − 2f(x)|² / |y|^{n+2} dy)^{1/2} in polar form:
/// ∫₀^∞ (∫_{S^{n−1}} |Δ²_{tθ}f(x)|² dσ(θ)) dt/t³, with the sphere integral
/// by a product rule and each second difference by spectral translation.
pub fn square_d_fullspace(f: &ScalarField, scales: &ScaleGrid, angular: usize) -> Result<ScalarField> {
    let grid = *f.grid();
    let n = grid.dim();
    let spec = transform(f);
    let w = scales.weight();
    let dirs = half_sphere_directions(n, angular);
    let mut acc = vec![0.0; grid.len()];
    for &t in scales.nodes() {
        check_node(&grid, t)?;
        for (d, wd) in &dirs {
            let g = inverse_transform(&spec.multiplied(|xi| {
                let a = TWO_PI * t * (xi[0] * d[0] + xi[1] * d[1] + xi[2] * d[2]);
                Complex64::new(2.0 * a.cos() - 2.0, 0.0)
            }));
            let c = w * wd / (t * t);
            for (a, v) in acc.iter_mut().zip(g.values()) {
                *a += c * v * v;
            }
        }
    }
    Ok(ScalarField::from_parts(grid, acc.into_iter().map(f64::sqrt).collect()))
}

/// ∫₀^∞ h(s)² ds/s for the radial profile h of an odd vector kernel,
/// estimated from the sampled kernel spectra at every scale node: each node
/// t contributes samples (s = t·k̄_m, h) for bins 4 ≤ m ≤ N/16 (k̄_m the mean
/// |ξ| in the bin), and the union is integrated by the trapezoid rule in ln s.
pub fn profile_constant(kernel: &KernelSpec, grid: &GridSpec, scales: &ScaleGrid) -> Result<f64> {
    let mut samples: Vec<(f64, f64)> = Vec::new();
    let max_bin = grid.size() / 16;
    for &t in scales.nodes() {
        let profile = KernelSpectrum::new(kernel, grid, t)?.radial_profile(max_bin);
        for m in 4..=max_bin {
            if profile.counts[m] > 0 {
                samples.push(((t * profile.mean_radius[m]).ln(), profile.values[m]));
            }
        }
    }
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(samples
        .windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 * w[0].1 + w[1].1 * w[1].1))
        .sum())
}
