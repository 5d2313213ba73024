//! Discrete Fourier analysis on the periodic box.
//!
//! Convention: `c(ξ_m) = h^n (−1)^{Σm} DFT(f)_m`, which approximates the
//! continuum transform `∫ e^{−2πi x·ξ} f(x) dx` for the box centered at the
//! origin. The inverse is `f(x_k) = L^{−n} Σ_m c(ξ_m) e^{2πi x_k·ξ_m}`.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fft::fft_nd;
use crate::field::{GridSpec, ScalarField, VectorField};

const TWO_PI: f64 = 2.0 * core::f64::consts::PI;

/// Complex coefficients on the dual lattice ξ ∈ (1/L)·{−N/2, …, N/2−1}^n,
/// stored in FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: GridSpec,
    coefficients: Vec<Complex64>,
}

impl Spectrum {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            coefficients: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_coefficients(grid: GridSpec, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                found: coefficients.len(),
            });
        }
        Ok(Self { grid, coefficients })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn coefficients_mut(&mut self) -> &mut [Complex64] {
        &mut self.coefficients
    }

    /// Coefficient-wise product with a multiplier evaluated at each ξ.
    pub fn multiplied(&self, m: impl Fn(&[f64; 3]) -> Complex64) -> Spectrum {
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, c)| c * m(&self.grid.frequency(i)))
            .collect();
        Spectrum { grid: self.grid, coefficients }
    }

    /// Coefficient-wise product with a real radial multiplier m(|ξ|).
    pub fn multiplied_radial(&self, m: impl Fn(f64) -> f64) -> Spectrum {
        self.multiplied(|xi| Complex64::new(m(norm3(xi)), 0.0))
    }

    /// Coefficient-wise product with precomputed values.
    pub fn multiplied_by(&self, m: &[Complex64]) -> Spectrum {
        let coefficients = self.coefficients.iter().zip(m).map(|(a, b)| a * b).collect();
        Spectrum { grid: self.grid, coefficients }
    }

    /// Largest deviation from c(−ξ) = conj(c(ξ)).
    pub fn hermitian_residual(&self) -> f64 {
        (0..self.coefficients.len())
            .map(|i| (self.coefficients[i] - self.coefficients[mirror(&self.grid, i)].conj()).norm())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn norm3(x: &[f64; 3]) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

/// Linear index of −ξ (equivalently of the reflected lattice point −x).
pub fn mirror(grid: &GridSpec, i: usize) -> usize {
    let k = grid.unravel(i);
    let size = grid.size();
    let mut r = [0usize; 3];
    for a in 0..grid.dim() {
        r[a] = (size - k[a]) % size;
    }
    grid.ravel(&r)
}

/// True when some axis of the dual index sits on the Nyquist frequency.
pub fn on_nyquist(grid: &GridSpec, i: usize) -> bool {
    grid.unravel(i)[..grid.dim()].contains(&(grid.size() / 2))
}

fn checkerboard(grid: &GridSpec, i: usize) -> f64 {
    let k = grid.unravel(i);
    if k[..grid.dim()].iter().sum::<usize>() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Forward transform of complex samples with the box convention.
pub fn transform_complex(grid: &GridSpec, values: &[Complex64]) -> Spectrum {
    let mut data = values.to_vec();
    fft_nd(&mut data, grid.dim(), grid.size(), false);
    let dv = grid.cell_volume();
    for (i, c) in data.iter_mut().enumerate() {
        *c *= dv * checkerboard(grid, i);
    }
    Spectrum { grid: *grid, coefficients: data }
}

pub fn transform(f: &ScalarField) -> Spectrum {
    let values: Vec<Complex64> = f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform_complex(f.grid(), &values)
}

/// Inverse transform keeping the complex samples.
pub fn inverse_transform_complex(s: &Spectrum) -> Vec<Complex64> {
    let grid = s.grid;
    let scale = 1.0 / grid.volume();
    let mut data: Vec<Complex64> = s
        .coefficients
        .iter()
        .enumerate()
        .map(|(i, c)| c * (scale * checkerboard(&grid, i)))
        .collect();
    fft_nd(&mut data, grid.dim(), grid.size(), true);
    data
}

/// Inverse transform; the imaginary part (roundoff for Hermitian input) is dropped.
pub fn inverse_transform(s: &Spectrum) -> ScalarField {
    let values = inverse_transform_complex(s).into_iter().map(|z| z.re).collect();
    ScalarField::from_parts(s.grid, values)
}

/// Applies a scalar multiplier and returns a real field. The multiplier must
/// satisfy m(−ξ) = conj(m(ξ)) on the lattice.
pub fn apply_multiplier(f: &ScalarField, m: impl Fn(&[f64; 3]) -> Complex64) -> Result<ScalarField> {
    let grid = *f.grid();
    let values: Vec<Complex64> = (0..grid.len()).map(|i| m(&grid.frequency(i))).collect();
    check_hermitian(&grid, &values)?;
    Ok(inverse_transform(&transform(f).multiplied_by(&values)))
}

/// Applies a scalar multiplier without the symmetry requirement.
pub fn apply_multiplier_complex(
    f: &ScalarField,
    m: impl Fn(&[f64; 3]) -> Complex64,
) -> Vec<Complex64> {
    inverse_transform_complex(&transform(f).multiplied(m))
}

/// Applies a vector multiplier m_a(ξ), one real output component per axis.
pub fn apply_vector_multiplier(
    f: &ScalarField,
    m: impl Fn(&[f64; 3], usize) -> Complex64,
) -> Result<VectorField> {
    let grid = *f.grid();
    let spec = transform(f);
    let mut comps = Vec::with_capacity(grid.dim());
    for a in 0..grid.dim() {
        let values: Vec<Complex64> = (0..grid.len()).map(|i| m(&grid.frequency(i), a)).collect();
        check_hermitian(&grid, &values)?;
        comps.push(inverse_transform(&spec.multiplied_by(&values)));
    }
    VectorField::new(comps)
}

fn check_hermitian(grid: &GridSpec, values: &[Complex64]) -> Result<()> {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let worst = (0..values.len())
        .map(|i| (values[i] - values[mirror(grid, i)].conj()).norm())
        .fold(0.0, f64::max);
    if worst > 1e-12 * scale.max(1e-300) {
        return Err(Error::NotHermitian(worst));
    }
    Ok(())
}

/// Riesz multiplier −iξ_a/|ξ| for component a; zero at ξ = 0 and on the
/// Nyquist index of axis a (so real input stays real).
pub fn riesz_symbol(grid: &GridSpec, xi: &[f64; 3], a: usize) -> Complex64 {
    let r = norm3(xi);
    if r == 0.0 || is_nyquist(grid, xi[a]) {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(0.0, -xi[a] / r)
}

/// Derivative multiplier 2πiξ_a, zero on the Nyquist index of axis a.
pub fn gradient_symbol(grid: &GridSpec, xi: &[f64; 3], a: usize) -> Complex64 {
    if is_nyquist(grid, xi[a]) {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(0.0, TWO_PI * xi[a])
}

fn is_nyquist(grid: &GridSpec, xi: f64) -> bool {
    (xi * grid.length() + (grid.size() / 2) as f64).abs() < 0.5
}

/// Riesz transform R g, multiplier −iξ/|ξ|.
pub fn riesz(g: &ScalarField) -> VectorField {
    let grid = *g.grid();
    apply_vector_multiplier(g, |xi, a| riesz_symbol(&grid, xi, a)).expect("Riesz symbol is Hermitian")
}

/// (−Δ)^{1/2} f, multiplier 2π|ξ|.
pub fn half_laplacian(f: &ScalarField) -> ScalarField {
    inverse_transform(&transform(f).multiplied_radial(|r| TWO_PI * r))
}

/// Spectral gradient, multiplier 2πiξ_a per component.
pub fn gradient(f: &ScalarField) -> VectorField {
    let grid = *f.grid();
    apply_vector_multiplier(f, |xi, a| gradient_symbol(&grid, xi, a)).expect("gradient symbol is Hermitian")
}

/// Convolution with the compact nonnegative bump ε^{−n}·exp(−1/(1−|x/ε|²)),
/// renormalized to unit discrete mass and applied as a direct sum.
pub fn mollify(f: &ScalarField, eps: f64) -> Result<ScalarField> {
    let grid = *f.grid();
    let h = grid.spacing();
    if !(eps >= 2.0 * h) || 4.0 * eps > grid.length() {
        return Err(Error::InvalidParameter("mollifier width must lie in [2h, L/4]"));
    }
    let n = grid.dim();
    let reach = (eps / h).ceil() as i64;
    let mut taps: Vec<([i64; 3], f64)> = Vec::new();
    let range = |active: bool| if active { -reach..=reach } else { 0..=0 };
    for a in range(true) {
        for b in range(n > 1) {
            for c in range(n > 2) {
                let r2 = ((a * a + b * b + c * c) as f64) * h * h / (eps * eps);
                if r2 < 1.0 {
                    taps.push(([a, b, c], (-1.0 / (1.0 - r2)).exp()));
                }
            }
        }
    }
    let mass: f64 = taps.iter().map(|t| t.1).sum();
    for t in &mut taps {
        t.1 /= mass;
    }
    let size = grid.size() as i64;
    let src = f.values();
    let out = (0..grid.len())
        .map(|i| {
            let k = grid.unravel(i);
            taps.iter()
                .map(|(d, w)| {
                    let mut idx = [0i64; 3];
                    for a in 0..n {
                        idx[a] = (k[a] as i64 - d[a]).rem_euclid(size);
                    }
                    w * src[grid.ravel_wrapped(&idx)]
                })
                .sum()
        })
        .collect();
    Ok(ScalarField::from_parts(grid, out))
}

/// Radial profile h of an odd vector kernel, from f̂(ξ) = i ξ/|ξ| h(|ξ|).
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    /// Bin centers k_m = m/L.
    pub centers: Vec<f64>,
    /// Mean |ξ| of the dual points in each bin.
    pub mean_radius: Vec<f64>,
    /// Bin averages of h.
    pub values: Vec<f64>,
    /// Dual points per bin.
    pub counts: Vec<usize>,
    /// Largest transverse or anti-Hermitian residual relative to max |h|.
    pub residual: f64,
}

impl RadialProfile {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Projects per-component spectra onto iξ/|ξ| and bins radially with width
/// 1/L. Dual points on a Nyquist index and bins beyond `max_bin` are
/// skipped; the ξ = 0 bin reports |ĉ(0)|.
pub fn radial_profile_from_spectra(
    grid: &GridSpec,
    spectra: &[Vec<Complex64>],
    max_bin: usize,
) -> RadialProfile {
    let n = grid.dim();
    let length = grid.length();
    let bins = max_bin + 1;
    let mut sum = vec![0.0; bins];
    let mut rsum = vec![0.0; bins];
    let mut counts = vec![0usize; bins];
    let mut worst = 0.0f64;
    let mut hmax = 0.0f64;
    for i in 0..grid.len() {
        if on_nyquist(grid, i) {
            continue;
        }
        let xi = grid.frequency(i);
        let r = norm3(&xi);
        let m = (r * length).round() as usize;
        if m > max_bin {
            continue;
        }
        if r == 0.0 {
            let mag = spectra.iter().map(|s| s[i].norm_sqr()).sum::<f64>().sqrt();
            sum[0] += mag;
            counts[0] += 1;
            continue;
        }
        let mut p = Complex64::new(0.0, 0.0);
        for a in 0..n {
            p += spectra[a][i] * (xi[a] / r);
        }
        let h = p.im;
        let resid = (0..n)
            .map(|a| (spectra[a][i] - Complex64::new(0.0, xi[a] / r * h)).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(resid);
        hmax = hmax.max(h.abs());
        sum[m] += h;
        rsum[m] += r;
        counts[m] += 1;
    }
    let values = sum.iter().zip(&counts).map(|(s, &c)| if c > 0 { s / c as f64 } else { 0.0 }).collect();
    let mean_radius = rsum
        .iter()
        .zip(&counts)
        .enumerate()
        .map(|(m, (s, &c))| if c > 0 && m > 0 { s / c as f64 } else { m as f64 / length })
        .collect();
    RadialProfile {
        centers: (0..bins).map(|m| m as f64 / length).collect(),
        mean_radius,
        values,
        counts,
        residual: if hmax > 0.0 { worst / hmax } else { worst },
    }
}

/// Radial profile of a lattice-sampled odd kernel (raw lattice transform),
/// over bins up to N/4.
pub fn radial_profile(k: &VectorField) -> Result<RadialProfile> {
    radial_profile_band(k, k.grid().size() / 4)
}

/// As [`radial_profile`] with an explicit largest bin index.
pub fn radial_profile_band(k: &VectorField, max_bin: usize) -> Result<RadialProfile> {
    let grid = *k.grid();
    let scale = k.components().iter().fold(0.0f64, |m, c| m.max(c.max_abs()));
    let mut odd = 0.0f64;
    for c in k.components() {
        let v = c.values();
        for i in 0..v.len() {
            odd = odd.max((v[i] + v[mirror(&grid, i)]).abs());
        }
    }
    if odd > 1e-12 * scale.max(1e-300) {
        return Err(Error::NotOdd(odd));
    }
    let spectra: Vec<Vec<Complex64>> =
        k.components().iter().map(|c| transform(c).coefficients).collect();
    Ok(radial_profile_from_spectra(&grid, &spectra, max_bin))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{sample, Generator};

    fn grid1() -> GridSpec {
        GridSpec::new(1, 64, 1.0).unwrap()
    }

    #[test]
    fn constant_has_single_coefficient() {
        let g = GridSpec::new(2, 16, 2.0).unwrap();
        let s = transform(&ScalarField::constant(g, 3.0));
        assert!((s.coefficients()[0].re - 12.0).abs() < 1e-12);
        assert!(s.coefficients()[1..].iter().all(|c| c.norm() < 1e-12));
    }

    #[test]
    fn plane_wave_two_coefficients() {
        let g = grid1();
        let f = sample(&g, &Generator::PlaneWave { m: [3, 0, 0] }).unwrap();
        let s = transform(&f);
        for (i, c) in s.coefficients().iter().enumerate() {
            let m = g.freq_index(i).abs();
            if m == 3 {
                assert!((c.re - 0.5).abs() < 1e-13 && c.im.abs() < 1e-13);
            } else {
                assert!(c.norm() < 1e-13);
            }
        }
    }

    #[test]
    fn riesz_of_sine_and_cosine() {
        let g = grid1();
        let s = ScalarField::from_fn(g, |x| (TWO_PI * x[0]).sin()).unwrap();
        let c = ScalarField::from_fn(g, |x| (TWO_PI * x[0]).cos()).unwrap();
        let rs = riesz(&s);
        let rc = riesz(&c);
        for i in 0..64 {
            assert!((rs.component(0).values()[i] + c.values()[i]).abs() < 1e-13);
            assert!((rc.component(0).values()[i] - s.values()[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn half_laplacian_and_gradient_examples() {
        let g = grid1();
        let s = ScalarField::from_fn(g, |x| (TWO_PI * x[0]).sin()).unwrap();
        let c = ScalarField::from_fn(g, |x| (TWO_PI * x[0]).cos()).unwrap();
        let hl = half_laplacian(&s);
        let gc = gradient(&c);
        for i in 0..64 {
            assert!((hl.values()[i] - TWO_PI * s.values()[i]).abs() < 1e-12);
            assert!((gc.component(0).values()[i] + TWO_PI * s.values()[i]).abs() < 1e-12);
        }
        let k = ScalarField::constant(g, 2.0);
        assert!(half_laplacian(&k).max_abs() < 1e-14);
        assert!(gradient(&k).component(0).max_abs() < 1e-14);
    }

    #[test]
    fn multiplier_symmetry_gate() {
        let g = grid1();
        let f = ScalarField::from_fn(g, |x| (TWO_PI * x[0]).sin()).unwrap();
        assert!(apply_multiplier(&f, |xi| Complex64::new(0.0, xi[0])).is_err());
        let id = apply_multiplier(&f, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(id.sub(&f).unwrap().max_abs() < 1e-14);
        let zero = apply_multiplier(&f, |_| Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(zero.max_abs(), 0.0);
    }

    #[test]
    fn mollifier_basics() {
        let g = GridSpec::new(2, 32, 4.0).unwrap();
        let c = ScalarField::constant(g, 1.5);
        let m = mollify(&c, 0.5).unwrap();
        assert!(m.values().iter().all(|v| (v - 1.5).abs() < 1e-13));
        assert!(mollify(&c, 0.1).is_err());
    }
}
