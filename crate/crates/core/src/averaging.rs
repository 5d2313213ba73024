//! Sphere and ball means, the odd kernels φ, ψ, η and Sato's ζ with their
//! scaled convolutions, and direct-quadrature oracles.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};
use num_complex::Complex64;
#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::field::{GridSpec, ScalarField, VectorField};
use crate::quadrature::{cube_face_rule, gauss_legendre_on, interpolate};
use crate::special::{ball_symbol, sinc_pi, sphere_symbol, unit_sphere_area};
use crate::spectral::{
    gradient_symbol, inverse_transform, norm3, radial_profile_from_spectra, riesz_symbol,
    transform, transform_complex, RadialProfile, Spectrum,
};

const TWO_PI: f64 = 2.0 * PI;

/// Tolerance on the spherical mean of Ω for ζ kernels.
pub const MEAN_ZERO_TOL: f64 = 1e-8;

/// Log-midpoint nodes for ∫ · dt/t over [t_min, t_max].
///
/// Node j is the geometric center t_min·2^{(j+1/2)/M} of the cell
/// [t_min·2^{j/M}, t_min·2^{(j+1)/M}], each with weight ln2/M; the cells
/// tile [t_min, t_min·2^{J/M}] with J = ⌊M·log₂(t_max/t_min)⌋.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleGrid {
    t_min: f64,
    t_max: f64,
    per_octave: usize,
    nodes: Vec<f64>,
}

impl ScaleGrid {
    pub fn new(grid: &GridSpec, t_min: f64, t_max: f64, per_octave: usize) -> Result<Self> {
        let h = grid.spacing();
        let slack = 1e-12 * grid.length();
        if per_octave == 0 {
            return Err(Error::InvalidScales("need at least one scale per octave"));
        }
        if !(t_min >= h - slack) {
            return Err(Error::InvalidScales("t_min below the grid spacing"));
        }
        if !(t_max <= 0.25 * grid.length() + slack) {
            return Err(Error::InvalidScales("t_max above L/4"));
        }
        let octaves = (t_max / t_min).log2();
        let count = (per_octave as f64 * octaves + 1e-9).floor();
        if !(count >= 1.0) {
            return Err(Error::InvalidScales("window shorter than one cell"));
        }
        let m = per_octave as f64;
        let nodes = (0..count as usize)
            .map(|j| t_min * 2f64.powf((j as f64 + 0.5) / m))
            .collect();
        Ok(Self { t_min, t_max, per_octave, nodes })
    }

    /// Default window [8h, L/4] with M = 8 (t_min capped at L/8 on coarse grids).
    pub fn default_for(grid: &GridSpec) -> Self {
        let t_max = 0.25 * grid.length();
        let t_min = (8.0 * grid.spacing()).min(0.5 * t_max);
        Self::new(grid, t_min, t_max, 8).expect("default window is valid")
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn per_octave(&self) -> usize {
        self.per_octave
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Quadrature weight ln2/M shared by every node.
    pub fn weight(&self) -> f64 {
        LN_2 / self.per_octave as f64
    }

    /// Same window with M doubled.
    pub fn refined(&self, grid: &GridSpec) -> Result<Self> {
        Self::new(grid, self.t_min, self.t_max, 2 * self.per_octave)
    }
}

pub(crate) fn check_scale(grid: &GridSpec, t: f64) -> Result<()> {
    let (min, max) = (grid.spacing(), 0.25 * grid.length());
    let slack = 1e-12 * grid.length();
    if !(t >= min - slack && t <= max + slack) {
        return Err(Error::ScaleOutOfRange { t, min, max });
    }
    Ok(())
}

/// Sphere mean from a precomputed spectrum (no range check).
pub(crate) fn sphere_mean_spectral(spec: &Spectrum, t: f64) -> ScalarField {
    let n = spec.grid().dim();
    inverse_transform(&spec.multiplied_radial(|r| sphere_symbol(n, TWO_PI * t * r)))
}

/// Ball mean from a precomputed spectrum (no range check).
pub(crate) fn ball_mean_spectral(spec: &Spectrum, t: f64) -> ScalarField {
    let n = spec.grid().dim();
    inverse_transform(&spec.multiplied_radial(|r| ball_symbol(n, TWO_PI * t * r)))
}

/// f_{S(x,t)}, the mean over the sphere of radius t, for every lattice x.
pub fn sphere_mean(f: &ScalarField, t: f64) -> Result<ScalarField> {
    check_scale(f.grid(), t)?;
    Ok(sphere_mean_spectral(&transform(f), t))
}

/// f_{B(x,t)}, the mean over the ball of radius t, for every lattice x.
pub fn ball_mean(f: &ScalarField, t: f64) -> Result<ScalarField> {
    check_scale(f.grid(), t)?;
    Ok(ball_mean_spectral(&transform(f), t))
}

/// Angular factor Ω(x′) of Sato's kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Omega {
    /// sign(x′₁).
    Sign,
    /// x′_a.
    Coordinate(usize),
    /// x′₁² − x′₂² (cos 2θ in the plane).
    Quadrupole,
    /// Constant, never mean-zero; kept for gate tests.
    Constant(f64),
}

impl Omega {
    pub fn eval(&self, d: &[f64; 3]) -> f64 {
        match *self {
            Omega::Sign => {
                if d[0] > 0.0 {
                    1.0
                } else if d[0] < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
            Omega::Coordinate(a) => d[a],
            Omega::Quadrupole => d[0] * d[0] - d[1] * d[1],
            Omega::Constant(c) => c,
        }
    }
}

/// ∫_{S^{n−1}} Ω dσ by a cube-face Gauss–Legendre rule.
pub fn omega_mean_zero(omega: &Omega, n: usize) -> f64 {
    cube_face_rule(n, 16).iter().map(|q| q.weight * omega.eval(&q.direction)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Phi,
    Psi,
    Eta,
    Zeta,
}

/// One of the averaging kernels, supported on the unit ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub epsilon: f64,
    pub omega: Omega,
}

impl KernelSpec {
    /// φ(x) = x/(nω_n|x|^n).
    pub fn phi() -> Self {
        Self { kind: KernelKind::Phi, epsilon: 0.0, omega: Omega::Constant(0.0) }
    }

    /// ψ(x) = (x/|x|^n − x)/(nω_n).
    pub fn psi() -> Self {
        Self { kind: KernelKind::Psi, ..Self::phi() }
    }

    /// η(x) = x/(nω_n).
    pub fn eta() -> Self {
        Self { kind: KernelKind::Eta, ..Self::phi() }
    }

    /// ζ(x) = |x|^{−n+ε}Ω(x′).
    pub fn zeta(epsilon: f64, omega: Omega) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::InvalidParameter("ζ needs ε > 0"));
        }
        Ok(Self { kind: KernelKind::Zeta, epsilon, omega })
    }

    pub fn is_vector(&self) -> bool {
        self.kind != KernelKind::Zeta
    }

    fn components(&self, n: usize) -> usize {
        if self.is_vector() {
            n
        } else {
            1
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.kind == KernelKind::Zeta {
            let m = omega_mean_zero(&self.omega, n);
            if m.abs() > MEAN_ZERO_TOL {
                return Err(Error::NotMeanZero(m));
            }
        }
        Ok(())
    }

    /// Unit-scale kernel at x (|x| = r > 0), extended smoothly past r = 1.
    fn value(&self, x: &[f64; 3], r: f64, n: usize, out: &mut [f64; 3]) {
        let area = unit_sphere_area(n);
        match self.kind {
            KernelKind::Phi | KernelKind::Psi | KernelKind::Eta => {
                let c = match self.kind {
                    KernelKind::Phi => r.powi(-(n as i32)),
                    KernelKind::Psi => r.powi(-(n as i32)) - 1.0,
                    _ => 1.0,
                } / area;
                for a in 0..n {
                    out[a] = c * x[a];
                }
            }
            KernelKind::Zeta => {
                let d = [x[0] / r, x[1] / r, x[2] / r];
                out[0] = r.powf(self.epsilon - n as f64) * self.omega.eval(&d);
            }
        }
    }

    /// Radial density g(s)·s^{n−1} of the polar form k(sθ) = A(θ)g(s), and
    /// the angular factor A(θ) (a vector for φ, ψ, η).
    fn polar_density(&self, s: f64, n: usize) -> f64 {
        let area = unit_sphere_area(n);
        match self.kind {
            KernelKind::Phi => 1.0 / area,
            KernelKind::Psi => (1.0 - s.powi(n as i32)) / area,
            KernelKind::Eta => s.powi(n as i32) / area,
            KernelKind::Zeta => s.powf(self.epsilon - 1.0),
        }
    }
}

/// Sub-samples per cell and axis used to project kernels onto tents.
fn subsamples(n: usize) -> usize {
    match n {
        1 => 64,
        2 => 8,
        _ => 4,
    }
}

/// Spectrum of a kernel scaled to k_t(x) = t^{−n}k(x/t) on a grid.
///
/// The lattice coefficients are tent projections h^{−n}∫k_t(z)β(z/h − j)dz
/// (β the tensor linear B-spline), computed on a sub-grid with an
/// antialiased ball boundary; the lattice transform is then divided by
/// Π sinc²(hξ_a) to undo the tent smoothing.
#[derive(Debug, Clone)]
pub struct KernelSpectrum {
    grid: GridSpec,
    t: f64,
    kind: KernelKind,
    components: Vec<Vec<Complex64>>,
}

impl KernelSpectrum {
    pub fn new(kernel: &KernelSpec, grid: &GridSpec, t: f64) -> Result<Self> {
        check_scale(grid, t)?;
        kernel.check(grid.dim())?;
        let coeffs = tent_coefficients(kernel, grid, t, subsamples(grid.dim()));
        Ok(Self::from_coefficients(kernel.kind, grid, t, coeffs))
    }

    fn from_coefficients(kind: KernelKind, grid: &GridSpec, t: f64, fields: Vec<Vec<f64>>) -> Self {
        let h = grid.spacing();
        let deconv: Vec<f64> = (0..grid.len())
            .map(|i| {
                let xi = grid.frequency(i);
                (0..grid.dim()).map(|a| sinc_pi(h * xi[a]).powi(2)).product::<f64>()
            })
            .collect();
        let components = fields
            .iter()
            .map(|v| {
                let c: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                let mut s = transform_complex(grid, &c);
                for (z, d) in s.coefficients_mut().iter_mut().zip(&deconv) {
                    *z /= d;
                }
                s.coefficients().to_vec()
            })
            .collect();
        Self { grid: *grid, t, kind, components }
    }

    pub fn scale(&self) -> f64 {
        self.t
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.components
    }

    /// Combined multiplier Σ_a k̂_a(ξ)·s_a(ξ) for a vector symbol s.
    pub fn contracted(&self, symbol: impl Fn(&[f64; 3], usize) -> Complex64) -> Vec<Complex64> {
        let n = self.grid.dim();
        (0..self.grid.len())
            .map(|i| {
                let xi = self.grid.frequency(i);
                (0..n).map(|a| self.components[a][i] * symbol(&xi, a)).sum()
            })
            .collect()
    }

    /// Multiplier of f ↦ k_t ∗ ∇f.
    pub fn gradient_multiplier(&self) -> Vec<Complex64> {
        let grid = self.grid;
        self.contracted(|xi, a| gradient_symbol(&grid, xi, a))
    }

    /// Multiplier of g ↦ k_t ∗ Rg.
    pub fn riesz_multiplier(&self) -> Vec<Complex64> {
        let grid = self.grid;
        self.contracted(|xi, a| riesz_symbol(&grid, xi, a))
    }

    /// k_t ∗ v for a vector kernel.
    pub fn apply_vector(&self, v: &VectorField) -> Result<ScalarField> {
        if self.kind == KernelKind::Zeta || *v.grid() != self.grid {
            return Err(Error::InvalidParameter("vector kernel and field on the same grid required"));
        }
        let mut acc = Spectrum::zeros(self.grid);
        for (a, comp) in v.components().iter().enumerate() {
            let s = transform(comp).multiplied_by(&self.components[a]);
            for (x, y) in acc.coefficients_mut().iter_mut().zip(s.coefficients()) {
                *x += y;
            }
        }
        Ok(inverse_transform(&acc))
    }

    /// k_t ∗ f for the scalar kernel ζ.
    pub fn apply_scalar(&self, f: &ScalarField) -> Result<ScalarField> {
        if self.kind != KernelKind::Zeta || *f.grid() != self.grid {
            return Err(Error::InvalidParameter("scalar kernel and field on the same grid required"));
        }
        Ok(inverse_transform(&transform(f).multiplied_by(&self.components[0])))
    }

    /// Radial profile of the (vector) kernel spectrum up to bin `max_bin`.
    pub fn radial_profile(&self, max_bin: usize) -> RadialProfile {
        radial_profile_from_spectra(&self.grid, &self.components, max_bin)
    }
}

/// Tent projections of k_t, placed on the periodic lattice (origin at N/2).
fn tent_coefficients(kernel: &KernelSpec, grid: &GridSpec, t: f64, sub: usize) -> Vec<Vec<f64>> {
    let n = grid.dim();
    let h = grid.spacing();
    let comps = kernel.components(n);
    let rc = (t / h).ceil() as usize + 1;
    let width = 2 * rc + 1;
    let fine = 2 * rc * sub;
    let hf = h / sub as f64;
    let tn = t.powi(n as i32);

    // Fine coordinate u_i and its two tent neighbours on the coarse stencil.
    let coord: Vec<f64> = (0..fine).map(|i| ((i as f64 + 0.5) / sub as f64 - rc as f64) * h).collect();
    let tent: Vec<(usize, f64)> = coord
        .iter()
        .map(|&u| {
            let v = u / h + rc as f64;
            let j = v.floor();
            (j as usize, v - j)
        })
        .collect();

    let slab_len = fine.pow(n as u32 - 1);
    let coarse_slab = width.pow(n as u32 - 1);
    let mut out = vec![vec![0.0; width.pow(n as u32)]; comps];
    let mut slab = vec![vec![0.0; slab_len]; comps];
    let mut val = [0.0f64; 3];
    let norm = 1.0 / (sub as f64).powi(n as i32);

    for i0 in 0..fine {
        for s in slab.iter_mut() {
            s.iter_mut().for_each(|v| *v = 0.0);
        }
        for rest in 0..slab_len {
            let mut x = [coord[i0], 0.0, 0.0];
            let mut r_idx = rest;
            for a in (1..n).rev() {
                x[a] = coord[r_idx % fine];
                r_idx /= fine;
            }
            let r = norm3(&x);
            let l1: f64 = x.iter().map(|v| v.abs()).sum();
            let w = hf * l1 / r;
            let cover = (0.5 - (r - t) / w).clamp(0.0, 1.0);
            if cover == 0.0 {
                continue;
            }
            let xs = [x[0] / t, x[1] / t, x[2] / t];
            kernel.value(&xs, r / t, n, &mut val);
            for c in 0..comps {
                slab[c][rest] = val[c] * cover / tn;
            }
        }
        let (j0, f0) = tent[i0];
        for c in 0..comps {
            let reduced = reduce_slab(&slab[c], n - 1, fine, width, &tent);
            for (k, v) in reduced.iter().enumerate() {
                if *v == 0.0 {
                    continue;
                }
                out[c][j0 * coarse_slab + k] += (1.0 - f0) * v * norm;
                if j0 + 1 < width {
                    out[c][(j0 + 1) * coarse_slab + k] += f0 * v * norm;
                }
            }
        }
    }

    let stencil_index = |k: usize| -> [usize; 3] {
        let mut m = [0usize; 3];
        let mut rest = k;
        for a in (0..n).rev() {
            m[a] = rest % width;
            rest /= width;
        }
        m
    };
    let centre = rc;
    if kernel.kind == KernelKind::Zeta {
        out[0][(0..n).fold(0, |acc, _| acc * width + centre)] = zeta_origin_coefficient(kernel, n, h, t);
    } else {
        // Enforce exact oddness: c_j = (c_j − c_{−j})/2.
        for c in out.iter_mut() {
            let len = c.len();
            for k in 0..len {
                let m = stencil_index(k);
                let mut r = [0usize; 3];
                for a in 0..n {
                    r[a] = 2 * centre - m[a];
                }
                let kr = (0..n).fold(0, |acc, a| acc * width + r[a]);
                if kr > k {
                    let d = 0.5 * (c[k] - c[kr]);
                    c[k] = d;
                    c[kr] = -d;
                } else if kr == k {
                    c[k] = 0.0;
                }
            }
        }
    }

    let size = grid.size();
    out.into_iter()
        .map(|c| {
            let mut field = vec![0.0; grid.len()];
            for (k, v) in c.iter().enumerate() {
                let m = stencil_index(k);
                let mut idx = [0i64; 3];
                for a in 0..n {
                    idx[a] = (size / 2 + m[a]) as i64 - centre as i64;
                }
                field[grid.ravel_wrapped(&idx)] += v;
            }
            field
        })
        .collect()
}

/// Reduces a slab of `dims` fine axes (each `fine` long) to tent coefficients.
fn reduce_slab(data: &[f64], dims: usize, fine: usize, width: usize, tent: &[(usize, f64)]) -> Vec<f64> {
    if dims == 0 {
        return data.to_vec();
    }
    let mut cur = data.to_vec();
    let mut shape = vec![fine; dims];
    for axis in 0..dims {
        let outer: usize = shape[..axis].iter().product();
        let inner: usize = shape[axis + 1..].iter().product();
        let mut next = vec![0.0; outer * width * inner];
        for o in 0..outer {
            for i in 0..fine {
                let (j, f) = tent[i];
                let src = (o * fine + i) * inner;
                let d0 = (o * width + j) * inner;
                for q in 0..inner {
                    let v = cur[src + q];
                    if v != 0.0 {
                        next[d0 + q] += (1.0 - f) * v;
                        if j + 1 < width {
                            next[d0 + inner + q] += f * v;
                        }
                    }
                }
            }
        }
        shape[axis] = width;
        cur = next;
    }
    cur
}

/// h^{−n}∫ζ_t(z)β(z/h)dz by exact radial integration along cube-face rays.
fn zeta_origin_coefficient(kernel: &KernelSpec, n: usize, h: f64, t: f64) -> f64 {
    let eps = kernel.epsilon;
    let mut total = 0.0;
    for q in cube_face_rule(n, 24) {
        let d = q.direction;
        let dmax = (0..n).fold(0.0f64, |m, a| m.max(d[a].abs()));
        let upper = (h / dmax).min(t);
        // Coefficients of Π_a (1 − r|d_a|/h) as a polynomial in r.
        let mut poly = [1.0, 0.0, 0.0, 0.0];
        for a in 0..n {
            let c = -d[a].abs() / h;
            for k in (1..=n).rev() {
                poly[k] += c * poly[k - 1];
            }
        }
        let radial: f64 = (0..=n)
            .map(|k| poly[k] * upper.powf(eps + k as f64) / (eps + k as f64))
            .sum();
        total += q.weight * kernel.omega.eval(&d) * radial;
    }
    total * t.powf(-eps) / h.powi(n as i32)
}

/// Field argument of a kernel convolution.
#[derive(Debug, Clone, Copy)]
pub enum KernelInput<'a> {
    Vector(&'a VectorField),
    Scalar(&'a ScalarField),
}

/// (k_t ∗ v) on the lattice via the kernel's numerical spectrum.
pub fn kernel_convolve(kernel: &KernelSpec, v: KernelInput<'_>, t: f64) -> Result<ScalarField> {
    match v {
        KernelInput::Vector(v) => KernelSpectrum::new(kernel, v.grid(), t)?.apply_vector(v),
        KernelInput::Scalar(f) => KernelSpectrum::new(kernel, f.grid(), t)?.apply_scalar(f),
    }
}

/// Node counts for the direct oracles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectRule {
    /// Angular nodes: full circle in 2-D, azimuthal count in 3-D (polar count is half).
    pub angular: usize,
    pub radial: usize,
    /// Lagrange points per axis for off-lattice evaluation.
    pub order: usize,
}

impl DirectRule {
    pub fn default_for(n: usize) -> Self {
        match n {
            1 => Self { angular: 2, radial: 256, order: 8 },
            2 => Self { angular: 64, radial: 32, order: 8 },
            _ => Self { angular: 64, radial: 16, order: 8 },
        }
    }
}

fn check_inside(grid: &GridSpec, x: &[f64; 3], t: f64) -> Result<()> {
    let half = 0.5 * grid.length();
    if (0..grid.dim()).any(|a| x[a].abs() + t > half) {
        return Err(Error::OutOfBox);
    }
    Ok(())
}

/// Weighted unit directions of the oracle sphere rule (weights sum to 1).
fn sphere_nodes(n: usize, angular: usize) -> Vec<([f64; 3], f64)> {
    match n {
        1 => vec![([1.0, 0.0, 0.0], 0.5), ([-1.0, 0.0, 0.0], 0.5)],
        2 => (0..angular)
            .map(|k| {
                let a = TWO_PI * (k as f64 + 0.5) / angular as f64;
                ([a.cos(), a.sin(), 0.0], 1.0 / angular as f64)
            })
            .collect(),
        _ => {
            let polar = (angular / 2).max(1);
            let mut out = Vec::with_capacity(polar * angular);
            for i in 0..polar {
                let th = PI * (i as f64 + 0.5) / polar as f64;
                for k in 0..angular {
                    let ph = TWO_PI * (k as f64 + 0.5) / angular as f64;
                    out.push(([th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()], th.sin()));
                }
            }
            let total: f64 = out.iter().map(|q| q.1).sum();
            out.iter_mut().for_each(|q| q.1 /= total);
            out
        }
    }
}

/// Mean of f over the sphere S(x, t) by direct quadrature.
pub fn sphere_mean_direct(f: &ScalarField, x: &[f64; 3], t: f64, rule: &DirectRule) -> Result<f64> {
    check_inside(f.grid(), x, t)?;
    let n = f.grid().dim();
    Ok(sphere_nodes(n, rule.angular)
        .iter()
        .map(|(d, w)| {
            let p = [x[0] + t * d[0], x[1] + t * d[1], x[2] + t * d[2]];
            w * interpolate(f, &p, rule.order)
        })
        .sum())
}

/// Mean of f over the ball B(x, t) by direct quadrature (midpoint radial rule).
pub fn ball_mean_direct(f: &ScalarField, x: &[f64; 3], t: f64, rule: &DirectRule) -> Result<f64> {
    check_inside(f.grid(), x, t)?;
    let n = f.grid().dim();
    let nodes = sphere_nodes(n, rule.angular);
    let mut total = 0.0;
    let mut mass = 0.0;
    for i in 0..rule.radial {
        let r = t * (i as f64 + 0.5) / rule.radial as f64;
        let wr = r.powi(n as i32 - 1);
        for (d, w) in &nodes {
            let p = [x[0] + r * d[0], x[1] + r * d[1], x[2] + r * d[2]];
            total += wr * w * interpolate(f, &p, rule.order);
            mass += wr * w;
        }
    }
    Ok(total / mass)
}

/// (k_t ∗ v)(x) by polar quadrature of the continuum kernel against the
/// interpolated field: ∫_{S^{n−1}}∫₀¹ g(s)s^{n−1} A(θ)·v(x − tsθ) ds dσ(θ).
pub fn kernel_convolve_direct(
    kernel: &KernelSpec,
    v: KernelInput<'_>,
    x: &[f64; 3],
    t: f64,
    angular: usize,
    radial: usize,
) -> Result<f64> {
    let grid = match v {
        KernelInput::Vector(v) => *v.grid(),
        KernelInput::Scalar(f) => *f.grid(),
    };
    let n = grid.dim();
    kernel.check(n)?;
    check_inside(&grid, x, t)?;
    let directions = cube_face_rule(n, angular);
    // For ζ substitute s = u^{1/ε} so s^{ε−1}ds = du/ε.
    let radial_nodes: Vec<(f64, f64)> = gauss_legendre_on(radial, 0.0, 1.0)
        .into_iter()
        .map(|(u, w)| match kernel.kind {
            KernelKind::Zeta => (u.powf(1.0 / kernel.epsilon), w / kernel.epsilon),
            _ => (u, w * kernel.polar_density(u, n)),
        })
        .collect();
    let mut total = 0.0;
    for q in &directions {
        let d = q.direction;
        let angular_factor = match kernel.kind {
            KernelKind::Zeta => kernel.omega.eval(&d),
            _ => 1.0,
        };
        if angular_factor == 0.0 {
            continue;
        }
        for &(s, w) in &radial_nodes {
            let p = [x[0] - t * s * d[0], x[1] - t * s * d[1], x[2] - t * s * d[2]];
            let value = match v {
                KernelInput::Vector(v) => (0..n)
                    .map(|a| d[a] * interpolate(v.component(a), &p, 8))
                    .sum::<f64>(),
                KernelInput::Scalar(f) => interpolate(f, &p, 8),
            };
            total += q.weight * angular_factor * w * value;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{sample, Generator};

    #[test]
    fn scale_grid_nodes() {
        let g = GridSpec::new(1, 64, 1.0).unwrap();
        let s = ScaleGrid::new(&g, 1.0 / 64.0, 0.25, 2).unwrap();
        assert_eq!(s.len(), 8);
        assert!(s.nodes().windows(2).all(|w| w[1] > w[0]));
        assert!(*s.nodes().last().unwrap() <= 0.25);
        assert!(ScaleGrid::new(&g, 0.001, 0.25, 2).is_err());
        assert!(ScaleGrid::new(&g, 0.1, 0.5, 2).is_err());
    }

    #[test]
    fn means_of_cosine() {
        let g = GridSpec::new(1, 64, 1.0).unwrap();
        let f = sample(&g, &Generator::PlaneWave { m: [1, 0, 0] }).unwrap();
        assert!(sphere_mean(&f, 0.25).unwrap().max_abs() < 1e-14);
        assert!(ball_mean(&ScalarField::constant(g, 2.0), 0.2).unwrap().values().iter().all(|v| (v - 2.0).abs() < 1e-14));
        assert!(sphere_mean(&f, 0.3).is_err());
    }

    #[test]
    fn omega_gate() {
        assert!(omega_mean_zero(&Omega::Sign, 1).abs() < 1e-15);
        assert!((omega_mean_zero(&Omega::Constant(1.0), 3) - 4.0 * PI).abs() < 1e-10);
        assert!(omega_mean_zero(&Omega::Quadrupole, 2).abs() < 1e-12);
        assert!(KernelSpectrum::new(&KernelSpec::zeta(0.5, Omega::Constant(1.0)).unwrap(), &GridSpec::new(2, 32, 4.0).unwrap(), 0.5).is_err());
    }
}
