//! Uniform periodic grids, sampled fields, test-function generators and
//! plain L^p norms.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::spectral::{inverse_transform_complex, Spectrum};

/// Generator values must fall below this level on the box boundary.
pub const BOUNDARY_DECAY: f64 = 1e-12;

/// Uniform periodic lattice on the box [−L/2, L/2)^n with N samples per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    n: usize,
    size: usize,
    length: f64,
}

impl GridSpec {
    pub fn new(n: usize, size: usize, length: f64) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::InvalidDimension(n));
        }
        if size < 16 || !size.is_power_of_two() {
            return Err(Error::InvalidSize(size));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidBox(length));
        }
        Ok(Self { n, size, length })
    }

    /// Dimension n.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Samples per axis N.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Box side L.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Lattice spacing h = L/N.
    pub fn spacing(&self) -> f64 {
        self.length / self.size as f64
    }

    /// Total number of lattice points N^n.
    pub fn len(&self) -> usize {
        self.size.pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Cell volume h^n.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.n as i32)
    }

    /// Box volume L^n.
    pub fn volume(&self) -> f64 {
        self.length.powi(self.n as i32)
    }

    /// Coordinate of lattice index k along one axis.
    pub fn coord(&self, k: usize) -> f64 {
        -0.5 * self.length + k as f64 * self.spacing()
    }

    /// Signed frequency index of storage index k (Nyquist maps to −N/2).
    pub fn freq_index(&self, k: usize) -> i64 {
        if k < self.size / 2 {
            k as i64
        } else {
            k as i64 - self.size as i64
        }
    }

    /// Storage index of the origin along each axis.
    pub fn origin_index(&self) -> usize {
        self.size / 2
    }

    /// Multi-index of a linear index (axis 0 slowest). Unused axes are 0.
    pub fn unravel(&self, mut idx: usize) -> [usize; 3] {
        let mut out = [0usize; 3];
        for a in (0..self.n).rev() {
            out[a] = idx % self.size;
            idx /= self.size;
        }
        out
    }

    /// Linear index of a multi-index.
    pub fn ravel(&self, k: &[usize]) -> usize {
        k.iter().take(self.n).fold(0, |acc, &i| acc * self.size + i)
    }

    /// Linear index of a multi-index given with wrap-around.
    pub fn ravel_wrapped(&self, k: &[i64]) -> usize {
        let n = self.size as i64;
        k.iter()
            .take(self.n)
            .fold(0, |acc, &i| acc * self.size + i.rem_euclid(n) as usize)
    }

    /// Position of a linear index; unused coordinates are 0.
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let k = self.unravel(idx);
        let mut x = [0.0; 3];
        for a in 0..self.n {
            x[a] = self.coord(k[a]);
        }
        x
    }

    /// Frequency vector ξ (units 1/length) of a linear index.
    pub fn frequency(&self, idx: usize) -> [f64; 3] {
        let k = self.unravel(idx);
        let mut xi = [0.0; 3];
        for a in 0..self.n {
            xi[a] = self.freq_index(k[a]) as f64 / self.length;
        }
        xi
    }

    /// Linear index of the lattice point at the box center.
    pub fn origin(&self) -> usize {
        self.ravel(&[self.size / 2; 3])
    }
}

/// Real samples of a function on a grid, lexicographic with axis 0 slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: GridSpec,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { grid, values })
    }

    /// Constructor for values already known to be valid.
    pub(crate) fn from_parts(grid: GridSpec, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: GridSpec, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    /// Samples a closure of the position.
    pub fn from_fn(grid: GridSpec, f: impl Fn(&[f64; 3]) -> f64) -> Result<Self> {
        let values = (0..grid.len()).map(|i| f(&grid.point(i))).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn at(&self, k: &[usize]) -> f64 {
        self.values[self.grid.ravel(k)]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_parts(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self::from_parts(self.grid, values))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Discrete mean Σf / N^n.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Riemann inner product Σ f g h^n.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum();
        Ok(s * self.grid.cell_volume())
    }
}

/// n scalar components on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    components: Vec<ScalarField>,
}

impl VectorField {
    pub fn new(components: Vec<ScalarField>) -> Result<Self> {
        let first = components.first().ok_or(Error::InvalidParameter("empty vector field"))?;
        let grid = *first.grid();
        if components.len() != grid.dim() {
            return Err(Error::InvalidParameter("component count must equal the dimension"));
        }
        if components.iter().any(|c| *c.grid() != grid) {
            return Err(Error::GridMismatch);
        }
        Ok(Self { components })
    }

    pub fn constant(grid: GridSpec, c: &[f64]) -> Self {
        Self {
            components: (0..grid.dim())
                .map(|a| ScalarField::constant(grid, c[a]))
                .collect(),
        }
    }

    pub fn grid(&self) -> &GridSpec {
        self.components[0].grid()
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn component(&self, a: usize) -> &ScalarField {
        &self.components[a]
    }

    pub fn into_components(self) -> Vec<ScalarField> {
        self.components
    }

    /// Pointwise Euclidean length |v(x)|.
    pub fn magnitude(&self) -> ScalarField {
        let grid = *self.grid();
        let values = (0..grid.len())
            .map(|i| {
                self.components
                    .iter()
                    .map(|c| c.values[i] * c.values[i])
                    .sum::<f64>()
                    .sqrt()
            })
            .collect();
        ScalarField::from_parts(grid, values)
    }

    /// Pointwise sum of components.
    pub fn sum_components(&self) -> ScalarField {
        let grid = *self.grid();
        let mut out = vec![0.0; grid.len()];
        for c in &self.components {
            for (o, v) in out.iter_mut().zip(&c.values) {
                *o += v;
            }
        }
        ScalarField::from_parts(grid, out)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            components: self.components.iter().map(|f| f.scaled(c)).collect(),
        }
    }
}

/// Test functions sampled by [`sample`].
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// exp(−π|x−c|²/σ²).
    Gaussian { sigma: f64, center: [f64; 3] },
    /// exp(−1/(1−|(x−c)/r|²)) inside the ball of radius r.
    Bump { radius: f64, center: [f64; 3] },
    /// cos(2π m·x/L).
    PlaneWave { m: [i64; 3] },
    /// Random band-pass field with wave vectors K/2 < |m| ≤ K, unit RMS.
    RandomBandlimited { k: usize, seed: u64 },
    /// |x|²·exp(−(|x|/R)^8): exactly quadratic near the center.
    QuadraticWindow { radius: f64 },
    Constant(f64),
    /// Linear combination of generators.
    Sum(Vec<(f64, Generator)>),
}

impl Generator {
    pub fn gaussian(sigma: f64) -> Self {
        Generator::Gaussian { sigma, center: [0.0; 3] }
    }

    pub fn bump(radius: f64) -> Self {
        Generator::Bump { radius, center: [0.0; 3] }
    }

    fn eval(&self, x: &[f64; 3], n: usize) -> f64 {
        let dist2 = |c: &[f64; 3]| (0..n).map(|a| (x[a] - c[a]) * (x[a] - c[a])).sum::<f64>();
        match self {
            Generator::Gaussian { sigma, center } => {
                (-core::f64::consts::PI * dist2(center) / (sigma * sigma)).exp()
            }
            Generator::Bump { radius, center } => {
                let s = dist2(center) / (radius * radius);
                if s < 1.0 {
                    (-1.0 / (1.0 - s)).exp()
                } else {
                    0.0
                }
            }
            Generator::QuadraticWindow { radius } => {
                let r2 = dist2(&[0.0; 3]);
                let s = r2 / (radius * radius);
                r2 * (-(s * s * s * s)).exp()
            }
            Generator::Constant(c) => *c,
            Generator::Sum(terms) => terms.iter().map(|(w, g)| w * g.eval(x, n)).sum(),
            Generator::PlaneWave { .. } | Generator::RandomBandlimited { .. } => {
                unreachable!("sampled spectrally or by the lattice formula")
            }
        }
    }

    /// Radius outside which the generator is below [`BOUNDARY_DECAY`],
    /// measured in the max-norm from the origin. `None` for periodic fields.
    fn extent(&self, n: usize, length: f64) -> Option<f64> {
        let decay = -BOUNDARY_DECAY.ln();
        let off = |c: &[f64; 3]| (0..n).fold(0.0f64, |m, a| m.max(c[a].abs()));
        match self {
            Generator::Gaussian { sigma, center } => {
                Some(off(center) + sigma * (decay / core::f64::consts::PI).sqrt())
            }
            Generator::Bump { radius, center } => Some(off(center) + radius),
            Generator::QuadraticWindow { radius } => {
                // r²·exp(−(r/R)^8) < 1e−12 once (r/R)^8 exceeds decay + ln r².
                let r_max = (n as f64).sqrt() * 0.5 * length;
                let e = decay + (r_max * r_max).max(1.0).ln();
                Some(radius * e.powf(0.125))
            }
            Generator::Constant(_) | Generator::PlaneWave { .. } | Generator::RandomBandlimited { .. } => None,
            Generator::Sum(terms) => terms
                .iter()
                .map(|(_, g)| g.extent(n, length))
                .try_fold(0.0f64, |m, e| e.map(|e| m.max(e))),
        }
    }

    fn validate(&self, grid: &GridSpec) -> Result<()> {
        match self {
            Generator::Gaussian { sigma, .. } if !(*sigma > 0.0) => {
                return Err(Error::InvalidParameter("gaussian width must be positive"))
            }
            Generator::Bump { radius, .. } | Generator::QuadraticWindow { radius }
                if !(*radius > 0.0) =>
            {
                return Err(Error::InvalidParameter("radius must be positive"))
            }
            Generator::RandomBandlimited { k, .. } if *k < 1 || 2 * *k >= grid.size() => {
                return Err(Error::InvalidParameter("band limit must satisfy 1 <= K < N/2"))
            }
            Generator::Sum(terms) => {
                for (_, g) in terms {
                    g.validate(grid)?;
                }
            }
            _ => {}
        }
        if let Some(extent) = self.extent(grid.dim(), grid.length()) {
            let limit = 0.5 * grid.length();
            if extent > limit {
                return Err(Error::Support { radius: extent, limit });
            }
        }
        Ok(())
    }
}

/// Samples a generator on the grid.
pub fn sample(grid: &GridSpec, generator: &Generator) -> Result<ScalarField> {
    generator.validate(grid)?;
    let n = grid.dim();
    let field = match generator {
        Generator::PlaneWave { m } => {
            // Integer arithmetic on the phase keeps the samples exactly periodic.
            let size = grid.size() as i64;
            let values = (0..grid.len())
                .map(|i| {
                    let k = grid.unravel(i);
                    let phase = (0..n)
                        .map(|a| m[a] * (k[a] as i64 - size / 2))
                        .sum::<i64>()
                        .rem_euclid(size);
                    (2.0 * core::f64::consts::PI * phase as f64 / size as f64).cos()
                })
                .collect();
            ScalarField::from_parts(*grid, values)
        }
        Generator::RandomBandlimited { k, seed } => random_bandlimited(grid, *k, *seed),
        g => ScalarField::new(*grid, (0..grid.len()).map(|i| g.eval(&grid.point(i), n)).collect())?,
    };
    if generator.extent(n, grid.length()).is_some() && boundary_max(&field) >= BOUNDARY_DECAY {
        return Err(Error::Support {
            radius: f64::NAN,
            limit: 0.5 * grid.length(),
        });
    }
    Ok(field)
}

/// Largest |f| on the lattice faces x_a = −L/2.
fn boundary_max(f: &ScalarField) -> f64 {
    let grid = f.grid();
    (0..grid.len())
        .filter(|&i| grid.unravel(i)[..grid.dim()].contains(&0))
        .fold(0.0, |m, i| m.max(f.values()[i].abs()))
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box–Muller on two uniforms in (0, 1].
    let u = |rng: &mut ChaCha8Rng| ((rng.next_u64() >> 11) as f64 + 1.0) / (1u64 << 53) as f64;
    let (u1, u2) = (u(rng), u(rng));
    (-2.0 * u1.ln()).sqrt() * (2.0 * core::f64::consts::PI * u2).cos()
}

fn random_bandlimited(grid: &GridSpec, k: usize, seed: u64) -> ScalarField {
    let n = grid.dim();
    let size = grid.size();
    let kk = k as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spec = Spectrum::zeros(*grid);
    let mut power = 0.0;
    let range = || -kk..=kk;
    let mut modes: Vec<[i64; 3]> = Vec::new();
    for m0 in range() {
        for m1 in if n > 1 { range() } else { 0..=0 } {
            for m2 in if n > 2 { range() } else { 0..=0 } {
                let m = [m0, m1, m2];
                let r2 = m0 * m0 + m1 * m1 + m2 * m2;
                // One representative per ±m pair: first nonzero entry positive.
                let first = m.iter().copied().find(|&c| c != 0).unwrap_or(0);
                if first > 0 && 4 * r2 > kk * kk && r2 <= kk * kk {
                    modes.push(m);
                }
            }
        }
    }
    let vol = grid.volume();
    let wrap = |c: i64| c.rem_euclid(size as i64) as usize;
    for m in &modes {
        let a = standard_normal(&mut rng);
        let b = standard_normal(&mut rng);
        power += 0.5 * (a * a + b * b);
        let c = Complex64::new(a, -b) * (0.5 * vol);
        let pos = grid.ravel(&[wrap(m[0]), wrap(m[1]), wrap(m[2])]);
        let neg = grid.ravel(&[wrap(-m[0]), wrap(-m[1]), wrap(-m[2])]);
        spec.coefficients_mut()[pos] = c;
        spec.coefficients_mut()[neg] = c.conj();
    }
    let scale = if power > 0.0 { 1.0 / power.sqrt() } else { 0.0 };
    let values = inverse_transform_complex(&spec)
        .into_iter()
        .map(|z| z.re * scale)
        .collect();
    ScalarField::from_parts(*grid, values)
}

/// Riemann-sum L^p norm (Σ|f|^p h^n)^{1/p}; `p = ∞` gives the max norm.
pub fn lp_norm(f: &ScalarField, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    if p.is_infinite() {
        return Ok(f.max_abs());
    }
    let dv = f.grid().cell_volume();
    let s: f64 = if p == 1.0 {
        f.values().iter().map(|v| v.abs()).sum()
    } else if p == 2.0 {
        f.values().iter().map(|v| v * v).sum()
    } else {
        f.values().iter().map(|v| v.abs().powf(p)).sum()
    };
    Ok((s * dv).powf(1.0 / p))
}
