//! Experiment runners: representation identities, isometry constants, the
//! pointwise S/T inequality, polarization, norm equivalence sweeps,
//! mollifier domination and maximal-function representation.
//!
//! Corpus members are processed in parallel; results are assembled in
//! corpus order, so reports do not depend on the worker count.

use std::f64::consts::PI;

use rayon::prelude::*;
use sqfn_core::averaging::{ball_mean, kernel_convolve, sphere_mean, KernelInput};
use sqfn_core::field::lp_norm;
use sqfn_core::maximal::{maximal_representation, spherical_maximal};
use sqfn_core::quadrature::gauss_legendre_on;
use sqfn_core::spectral::{gradient, mollify};
use sqfn_core::squarefn::{profile_constant, square_s, square_t, FamilyKind, MultiplierBank};
use sqfn_core::weights::weighted_lp_norm;
use sqfn_core::{GridSpec, KernelSpec, ScalarField, ScaleGrid, WeightSpec};

use crate::corpus::{bandlimited_corpus, describe, smooth_corpus, CorpusMember};
use crate::error::{Result, SqfnError};
use crate::report::{relative_spread, spread_factor, Bound, ExperimentReport, ReportItem};

pub const REPRESENTATION_TOL: f64 = 1e-3;
/// Minimum residual reduction when N doubles.
pub const REFINEMENT_MIN: f64 = 1.5;
pub const ISOMETRY_SPREAD_TOL: f64 = 0.01;
pub const PROFILE_AGREEMENT_TOL: f64 = 0.02;
pub const POINTWISE_SLACK: f64 = 1e-8;
pub const PARTS_TOL: f64 = 1e-3;
pub const POLARIZATION_TOL: f64 = 0.02;
pub const BILINEARITY_TOL: f64 = 1e-12;
pub const MAXIMAL_TOL: f64 = 1e-3;
pub const EQUIVALENCE_TOL: f64 = 0.02;
/// max/min gate on unweighted ratios for p ≠ 2.
pub const SPREAD_FACTOR_P: f64 = 10.0;
/// max/min gate on weighted ratios.
pub const SPREAD_FACTOR_WEIGHTED: f64 = 25.0;

fn sample_all(corpus: &[CorpusMember], grid: &GridSpec) -> Result<Vec<ScalarField>> {
    corpus.iter().map(|m| m.sample(grid)).collect()
}

fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> Result<R> + Sync + Send) -> Result<Vec<R>> {
    items.par_iter().map(f).collect::<Vec<_>>().into_iter().collect()
}

/// Right end of the cells tiled by a scale grid, t_min·2^{J/M}.
pub fn window_top(scales: &ScaleGrid) -> f64 {
    scales.t_min() * 2f64.powf(scales.len() as f64 / scales.per_octave() as f64)
}

/// Max-norm residuals of the sphere (via φ) and ball (via ψ) identities,
/// relative to ‖∇f‖_∞·t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepresentationResidual {
    pub t: f64,
    pub sphere: f64,
    pub ball: f64,
}

pub fn verify_representation(f: &ScalarField, t: f64) -> Result<RepresentationResidual> {
    let grad = gradient(f);
    let scale = grad.magnitude().max_abs() * t;
    let dev_s = f.sub(&sphere_mean(f, t)?)?;
    let dev_b = f.sub(&ball_mean(f, t)?)?;
    let phi = kernel_convolve(&KernelSpec::phi(), KernelInput::Vector(&grad), t)?.scaled(t);
    let psi = kernel_convolve(&KernelSpec::psi(), KernelInput::Vector(&grad), t)?.scaled(t);
    if scale == 0.0 {
        return Ok(RepresentationResidual { t, sphere: dev_s.max_abs(), ball: dev_b.max_abs() });
    }
    Ok(RepresentationResidual {
        t,
        sphere: dev_s.sub(&phi)?.max_abs() / scale,
        ball: dev_b.sub(&psi)?.max_abs() / scale,
    })
}

/// Ratios ‖T̃g‖₂/‖g‖₂ and ‖S̃g‖₂/‖g‖₂ over a corpus, with the independent
/// radial-profile estimates of C₁ and C₂.
#[derive(Debug, Clone, PartialEq)]
pub struct IsometryEstimate {
    pub ratios_t: Vec<f64>,
    pub ratios_s: Vec<f64>,
    /// Corpus means of the ratios.
    pub c1: f64,
    pub c2: f64,
    /// max/min − 1.
    pub spread_t: f64,
    pub spread_s: f64,
    /// sqrt of the scale quadrature of the squared radial profiles.
    pub c1_profile: f64,
    pub c2_profile: f64,
}

impl IsometryEstimate {
    pub fn agreement_t(&self) -> f64 {
        (self.c1 / self.c1_profile - 1.0).abs()
    }

    pub fn agreement_s(&self) -> f64 {
        (self.c2 / self.c2_profile - 1.0).abs()
    }
}

/// (C₁, C₂) from the sampled kernel profiles over `scales`.
pub fn profile_constants(grid: &GridSpec, scales: &ScaleGrid) -> Result<(f64, f64)> {
    let (c1, c2) = rayon::join(
        || profile_constant(&KernelSpec::phi(), grid, scales),
        || profile_constant(&KernelSpec::psi(), grid, scales),
    );
    Ok((c1?.sqrt(), c2?.sqrt()))
}

/// Widest admissible window [h, L/4] used for the isometry constants.
pub fn isometry_scales(grid: &GridSpec, per_octave: usize) -> Result<ScaleGrid> {
    Ok(ScaleGrid::new(grid, grid.spacing(), 0.25 * grid.length(), per_octave)?)
}

pub fn estimate_isometry_constants(corpus: &[ScalarField], scales: &ScaleGrid) -> Result<IsometryEstimate> {
    let grid = *corpus
        .first()
        .ok_or_else(|| SqfnError::Usage("isometry needs a non-empty corpus".into()))?
        .grid();
    let bank_t = MultiplierBank::new(FamilyKind::PhiRiesz, &grid, scales)?;
    let bank_s = MultiplierBank::new(FamilyKind::PsiRiesz, &grid, scales)?;
    let ratios = par_map(corpus, |g| {
        let ng = lp_norm(g, 2.0)?;
        let rt = lp_norm(&bank_t.apply(g)?, 2.0)? / ng;
        let rs = lp_norm(&bank_s.apply(g)?, 2.0)? / ng;
        Ok((rt, rs))
    })?;
    let (ratios_t, ratios_s): (Vec<f64>, Vec<f64>) = ratios.into_iter().unzip();
    let (c1_profile, c2_profile) = profile_constants(&grid, scales)?;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    Ok(IsometryEstimate {
        c1: mean(&ratios_t),
        c2: mean(&ratios_s),
        spread_t: relative_spread(&ratios_t),
        spread_s: relative_spread(&ratios_s),
        ratios_t,
        ratios_s,
        c1_profile,
        c2_profile,
    })
}

/// 1-D radial profiles in closed form, a = 2πs:
/// h_φ = −(1 − cos a)/a and h_η = −(sin a − a cos a)/a², h_ψ = h_φ − h_η.
pub fn profile_phi_1d(s: f64) -> f64 {
    let a = 2.0 * PI * s;
    if a < 1e-4 {
        return -a / 2.0;
    }
    -(1.0 - a.cos()) / a
}

pub fn profile_eta_1d(s: f64) -> f64 {
    let a = 2.0 * PI * s;
    if a < 1e-3 {
        return -a / 3.0;
    }
    -(a.sin() - a * a.cos()) / (a * a)
}

/// (∫₀^∞ h_φ² ds/s, ∫₀^∞ h_ψ² ds/s) for n = 1 by Gauss–Legendre panels in s
/// up to s = 2000 plus the averaged 1/s³ tail.
pub fn closed_form_constants_1d() -> (f64, f64) {
    let (panel, s_max) = (0.5, 2000.0);
    let mut c1 = 0.0;
    let mut c2 = 0.0;
    let mut a = 0.0;
    while a < s_max {
        for (s, w) in gauss_legendre_on(16, a, a + panel) {
            let hp = profile_phi_1d(s);
            let hs = hp - profile_eta_1d(s);
            c1 += w * hp * hp / s;
            c2 += w * hs * hs / s;
        }
        a += panel;
    }
    // For large a, h_φ² averages 3/(2a²) and h_ψ ≈ −1/a.
    let tail = |mean_sq: f64| mean_sq / (4.0 * PI * PI) / (2.0 * s_max * s_max);
    (c1 + tail(1.5), c2 + tail(1.0))
}

/// Pointwise check of S ≤ c·T + ε_trunc for the stated constant
/// c = n/(n+2) and for c = sqrt(n/(n+2)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointwiseCheck {
    /// max over x of S − (n/(n+2))T − ε_trunc.
    pub stated_excess: f64,
    /// max over x of S − sqrt(n/(n+2))T − ε_trunc.
    pub sqrt_excess: f64,
    pub stated_violations: usize,
    pub sqrt_violations: usize,
    /// max S/T over points with T above 1e-6·max T.
    pub max_ratio: f64,
    pub max_trunc: f64,
}

/// ε_trunc(x) = sqrt(((2n+2)/(n+2))·max(A, 0)) with
/// A = D_B(ε)²/((2n+2)ε²) − D_B(T)²/((2n+2)T²), D_B(t) = f − f_{B(x,t)},
/// over the window [ε, T] tiled by `scales`.
pub fn truncation_bound(f: &ScalarField, scales: &ScaleGrid) -> Result<ScalarField> {
    let n = f.grid().dim() as f64;
    let (lo, hi) = (scales.t_min(), window_top(scales));
    let d_lo = f.sub(&ball_mean(f, lo)?)?;
    let d_hi = f.sub(&ball_mean(f, hi)?)?;
    let c = 2.0 * n + 2.0;
    Ok(d_lo.zip_with(&d_hi, |a, b| {
        let bnd = a * a / (c * lo * lo) - b * b / (c * hi * hi);
        (c / (n + 2.0) * bnd.max(0.0)).sqrt()
    })?)
}

pub fn verify_pointwise_inequality(f: &ScalarField, scales: &ScaleGrid) -> Result<PointwiseCheck> {
    let n = f.grid().dim() as f64;
    let t = square_t(f, scales)?;
    let s = square_s(f, scales)?;
    let trunc = truncation_bound(f, scales)?;
    let stated = n / (n + 2.0);
    let root = stated.sqrt();
    let t_floor = 1e-6 * t.max_abs();
    let mut out = PointwiseCheck {
        stated_excess: f64::NEG_INFINITY,
        sqrt_excess: f64::NEG_INFINITY,
        stated_violations: 0,
        sqrt_violations: 0,
        max_ratio: 0.0,
        max_trunc: trunc.max_abs(),
    };
    for ((&tv, &sv), &e) in t.values().iter().zip(s.values()).zip(trunc.values()) {
        let ex_stated = sv - stated * tv - e;
        let ex_root = sv - root * tv - e;
        out.stated_excess = out.stated_excess.max(ex_stated);
        out.sqrt_excess = out.sqrt_excess.max(ex_root);
        out.stated_violations += (ex_stated > POINTWISE_SLACK) as usize;
        out.sqrt_violations += (ex_root > POINTWISE_SLACK) as usize;
        if tv > t_floor {
            out.max_ratio = out.max_ratio.max(sv / tv);
        }
    }
    Ok(out)
}

/// Both sides of ∫_ε^T D_B² dt/t³ = A(T) − A(ε) + (n/(n+1))∫_ε^T D_B·D_S dt/t³,
/// A(t) = −D_B(t)²/((2n+2)t²), integrals by the same scale quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartsResidual {
    pub lhs: f64,
    pub boundary: f64,
    pub cross: f64,
    /// |lhs − boundary − cross| / |lhs|.
    pub residual: f64,
}

/// The identity at several lattice points; [ε, T] is tiled by
/// `per_octave` cells per octave, T rounded down to a whole cell.
pub fn parts_identity_at(
    f: &ScalarField,
    points: &[usize],
    eps: f64,
    big_t: f64,
    per_octave: usize,
) -> Result<Vec<PartsResidual>> {
    let grid = *f.grid();
    if let Some(&p) = points.iter().find(|&&p| p >= grid.len()) {
        return Err(SqfnError::Usage(format!("lattice index {p} outside the grid")));
    }
    let n = grid.dim() as f64;
    let scales = ScaleGrid::new(&grid, eps, big_t, per_octave)?;
    let w = scales.weight();
    let mut lhs = vec![0.0; points.len()];
    let mut cross = vec![0.0; points.len()];
    for &t in scales.nodes() {
        let db = f.sub(&ball_mean(f, t)?)?;
        let ds = f.sub(&sphere_mean(f, t)?)?;
        for (k, &p) in points.iter().enumerate() {
            let (b, s) = (db.values()[p], ds.values()[p]);
            lhs[k] += w * b * b / (t * t);
            cross[k] += w * b * s / (t * t);
        }
    }
    let c = 2.0 * n + 2.0;
    let a = |t: f64| -> Result<Vec<f64>> {
        let db = f.sub(&ball_mean(f, t)?)?;
        Ok(points.iter().map(|&p| -db.values()[p].powi(2) / (c * t * t)).collect())
    };
    let (a_lo, a_hi) = (a(scales.t_min())?, a(window_top(&scales))?);
    Ok((0..points.len())
        .map(|k| {
            let boundary = a_hi[k] - a_lo[k];
            let cross = n / (n + 1.0) * cross[k];
            let residual = if lhs[k] == 0.0 {
                (boundary + cross).abs()
            } else {
                (lhs[k] - boundary - cross).abs() / lhs[k].abs()
            };
            PartsResidual { lhs: lhs[k], boundary, cross, residual }
        })
        .collect())
}

pub fn verify_parts_identity(f: &ScalarField, x: usize, eps: f64, big_t: f64, per_octave: usize) -> Result<PartsResidual> {
    Ok(parts_identity_at(f, &[x], eps, big_t, per_octave)?[0])
}

/// Five probe points: the origin and four off-center lattice points.
pub fn parts_probe_points(grid: &GridSpec) -> Vec<usize> {
    let n = grid.dim();
    let o = grid.origin_index() as i64;
    let q = (grid.size() / 16) as i64;
    let offsets: [[i64; 3]; 5] = [[0, 0, 0], [q, 0, 0], [0, -q, q], [2 * q, 2 * q, 0], [-2 * q, q, -q]];
    offsets
        .iter()
        .map(|d| {
            let k: Vec<i64> = (0..n).map(|a| o + d[a]).collect();
            grid.ravel_wrapped(&k)
        })
        .collect()
}

/// Polarized isometry Σ_x Σ_j w_j (T̃-family g)(T̃-family h) hⁿ against
/// C₁²·Σ_x g·h hⁿ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationResult {
    pub lhs: f64,
    pub rhs: f64,
    /// ‖g‖₂‖h‖₂C₁².
    pub scale: f64,
    /// |lhs − rhs| / scale.
    pub residual: f64,
}

pub fn verify_polarization(g: &ScalarField, h: &ScalarField, scales: &ScaleGrid, c1_sq: f64) -> Result<PolarizationResult> {
    let bank = MultiplierBank::new(FamilyKind::PhiRiesz, g.grid(), scales)?;
    let fg = bank.family(g)?;
    let fh = bank.family(h)?;
    let w = scales.weight();
    let mut lhs = 0.0;
    for (a, b) in fg.fields().iter().zip(fh.fields()) {
        lhs += w * a.inner(b)?;
    }
    let rhs = c1_sq * g.inner(h)?;
    let scale = lp_norm(g, 2.0)? * lp_norm(h, 2.0)? * c1_sq;
    Ok(PolarizationResult { lhs, rhs, scale, residual: (lhs - rhs).abs() / scale })
}

/// K(f_ε) ≤ (Kf)∗φ_ε for K ∈ {T, S}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MollifierCheck {
    pub eps: f64,
    /// max over x of K(f_ε) − (Kf)∗φ_ε.
    pub excess_t: f64,
    pub excess_s: f64,
    pub violations: usize,
    /// ‖K(f_ε) − Kf‖₂ / ‖Kf‖₂.
    pub distance_t: f64,
    pub distance_s: f64,
}

pub fn verify_mollifier_domination(f: &ScalarField, eps: f64, scales: &ScaleGrid) -> Result<MollifierCheck> {
    let fe = mollify(f, eps)?;
    let mut excess = [0.0; 2];
    let mut distance = [0.0; 2];
    let mut violations = 0;
    let ops: [fn(&ScalarField, &ScaleGrid) -> sqfn_core::Result<ScalarField>; 2] = [square_t, square_s];
    for (k, op) in ops.iter().enumerate() {
        let kf = op(f, scales)?;
        let left = op(&fe, scales)?;
        let right = mollify(&kf, eps)?;
        let diff = left.sub(&right)?;
        excess[k] = diff.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
        violations += diff.values().iter().filter(|&&d| d > POINTWISE_SLACK).count();
        let norm = lp_norm(&kf, 2.0)?;
        distance[k] = if norm > 0.0 { lp_norm(&left.sub(&kf)?, 2.0)? / norm } else { 0.0 };
    }
    Ok(MollifierCheck {
        eps,
        excess_t: excess[0],
        excess_s: excess[1],
        violations,
        distance_t: distance[0],
        distance_s: distance[1],
    })
}

/// max|spherical_maximal − maximal_representation| / max|spherical_maximal|.
pub fn verify_maximal(f: &ScalarField, scales: &ScaleGrid) -> Result<f64> {
    let direct = spherical_maximal(f, scales)?;
    let rep = maximal_representation(f, scales)?;
    let peak = direct.max_abs();
    let diff = direct.sub(&rep)?.max_abs();
    Ok(if peak > 0.0 { diff / peak } else { diff })
}

/// One corpus member at one exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceRow {
    pub name: String,
    pub generator: String,
    pub p: f64,
    pub ratio_t: f64,
    pub ratio_s: f64,
}

/// ‖Tf‖/‖∇f‖ and ‖Sf‖/‖∇f‖ in L^p or L^p_w for every member and p.
pub fn equivalence_ratios(
    corpus: &[CorpusMember],
    grid: &GridSpec,
    p_list: &[f64],
    weight: Option<&WeightSpec>,
    scales: &ScaleGrid,
) -> Result<Vec<EquivalenceRow>> {
    for &p in p_list {
        if !(p >= 1.0) || p.is_infinite() {
            return Err(SqfnError::Core(sqfn_core::Error::InvalidExponent(p)));
        }
        if let Some(w) = weight {
            if !w.admissible(grid.dim(), p) {
                return Err(SqfnError::Usage(format!(
                    "weight exponent {} is not an A_p power for n = {}, p = {p}",
                    w.alpha,
                    grid.dim()
                )));
            }
        }
    }
    let norm = |f: &ScalarField, p: f64| -> Result<f64> {
        Ok(match weight {
            Some(w) => weighted_lp_norm(f, w, p)?,
            None => lp_norm(f, p)?,
        })
    };
    let rows = par_map(corpus, |m| {
        let f = m.sample(grid)?;
        let grad = gradient(&f).magnitude();
        let t = square_t(&f, scales)?;
        let s = square_s(&f, scales)?;
        p_list
            .iter()
            .map(|&p| {
                let g = norm(&grad, p)?;
                Ok(EquivalenceRow {
                    name: m.name.clone(),
                    generator: describe(&m.generator),
                    p,
                    ratio_t: norm(&t, p)? / g,
                    ratio_s: norm(&s, p)? / g,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(rows.into_iter().flatten().collect())
}

/// Ratio tables with per-p spreads. At p = 2 without a weight the ratios
/// are compared against `constants` = (C₁, C₂).
pub fn norm_equivalence_sweep(
    corpus: &[CorpusMember],
    grid: &GridSpec,
    p_list: &[f64],
    weight: Option<&WeightSpec>,
    scales: &ScaleGrid,
    constants: Option<(f64, f64)>,
) -> Result<ExperimentReport> {
    let rows = equivalence_ratios(corpus, grid, p_list, weight, scales)?;
    let mut report = ExperimentReport::new("equivalence");
    report.grid(grid).scales(scales).param("corpus_size", corpus.len());
    report.param("p_list", p_list.to_vec());
    report.param("alpha", weight.map(|w| w.alpha));
    if let Some((c1, c2)) = constants {
        report.constant("c1", c1).constant("c2", c2);
    }
    for r in &rows {
        report.item(
            ReportItem::new(&r.name)
                .param("generator", r.generator.clone())
                .param("p", r.p)
                .value("ratio_t", r.ratio_t)
                .value("ratio_s", r.ratio_s),
        );
    }
    for &p in p_list {
        let at_p: Vec<&EquivalenceRow> = rows.iter().filter(|r| r.p == p).collect();
        let rt: Vec<f64> = at_p.iter().map(|r| r.ratio_t).collect();
        let rs: Vec<f64> = at_p.iter().map(|r| r.ratio_s).collect();
        let finite = rt.iter().chain(&rs).all(|v| v.is_finite() && *v > 0.0);
        report.check(format!("p={p} ratios finite"), finite as u8 as f64, Bound::AtLeast, 1.0);
        match (weight, constants) {
            (None, Some((c1, c2))) if p == 2.0 => {
                let dev = |v: &[f64], c: f64| v.iter().map(|r| (r / c - 1.0).abs()).fold(0.0, f64::max);
                report.check("p=2 max |ratio_t/C1 - 1|", dev(&rt, c1), Bound::AtMost, EQUIVALENCE_TOL);
                report.check("p=2 max |ratio_s/C2 - 1|", dev(&rs, c2), Bound::AtMost, EQUIVALENCE_TOL);
            }
            _ => {
                let gate = if weight.is_some() { SPREAD_FACTOR_WEIGHTED } else { SPREAD_FACTOR_P };
                report.check(format!("p={p} spread factor T"), spread_factor(&rt), Bound::AtMost, gate);
                report.check(format!("p={p} spread factor S"), spread_factor(&rs), Bound::AtMost, gate);
            }
        }
    }
    Ok(report)
}

/// Verification suites of the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Representation,
    Isometry,
    Pointwise,
    Parts,
    Polarization,
    Mollifier,
    Maximal,
    Equivalence,
}

impl Suite {
    pub const VERIFY: [&'static str; 7] =
        ["representation", "isometry", "pointwise", "parts", "polarization", "mollifier", "maximal"];

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "representation" => Suite::Representation,
            "isometry" => Suite::Isometry,
            "pointwise" => Suite::Pointwise,
            "parts" => Suite::Parts,
            "polarization" => Suite::Polarization,
            "mollifier" => Suite::Mollifier,
            "maximal" => Suite::Maximal,
            "equivalence" => Suite::Equivalence,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Representation => "representation",
            Suite::Isometry => "isometry",
            Suite::Pointwise => "pointwise",
            Suite::Parts => "parts",
            Suite::Polarization => "polarization",
            Suite::Mollifier => "mollifier",
            Suite::Maximal => "maximal",
            Suite::Equivalence => "equivalence",
        }
    }
}

/// Parameters shared by every suite. `None` selects the suite default.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub dim: usize,
    pub size: usize,
    pub length: f64,
    pub seed: u64,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub per_octave: Option<usize>,
    pub corpus_size: Option<usize>,
    pub p_list: Vec<f64>,
    pub alpha: Option<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            dim: 2,
            size: 256,
            length: 8.0,
            seed: 1,
            t_min: None,
            t_max: None,
            per_octave: None,
            corpus_size: None,
            p_list: vec![1.5, 2.0, 3.0],
            alpha: None,
        }
    }
}

impl SuiteConfig {
    pub fn grid(&self) -> Result<GridSpec> {
        Ok(GridSpec::new(self.dim, self.size, self.length)?)
    }

    /// Window [t_min, t_max] with defaults [8h, L/4].
    pub fn scales(&self, grid: &GridSpec) -> Result<ScaleGrid> {
        self.scales_from(grid, 8.0 * grid.spacing())
    }

    fn scales_from(&self, grid: &GridSpec, default_min: f64) -> Result<ScaleGrid> {
        let t_max = self.t_max.unwrap_or(0.25 * grid.length());
        let t_min = self.t_min.unwrap_or(default_min);
        Ok(ScaleGrid::new(grid, t_min, t_max, self.scales_per_octave())?)
    }

    /// M, default 8.
    pub fn scales_per_octave(&self) -> usize {
        self.per_octave.unwrap_or(8)
    }

    fn smooth(&self, default: usize) -> Vec<CorpusMember> {
        smooth_corpus(self.length, self.corpus_size.unwrap_or(default))
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<ExperimentReport> {
    let grid = cfg.grid()?;
    let mut report = match suite {
        Suite::Representation => representation_suite(cfg, &grid)?,
        Suite::Isometry => isometry_suite(cfg, &grid)?,
        Suite::Pointwise => pointwise_suite(cfg, &grid)?,
        Suite::Parts => parts_suite(cfg, &grid)?,
        Suite::Polarization => polarization_suite(cfg, &grid)?,
        Suite::Mollifier => mollifier_suite(cfg, &grid)?,
        Suite::Maximal => maximal_suite(cfg, &grid)?,
        Suite::Equivalence => equivalence_suite(cfg, &grid)?,
    };
    report.param("seed", cfg.seed);
    Ok(report)
}

fn representation_suite(cfg: &SuiteConfig, grid: &GridSpec) -> Result<ExperimentReport> {
    let l = grid.length();
    let h = grid.spacing();
    let ts: Vec<f64> = [l / 32.0, l / 16.0, l / 8.0].into_iter().filter(|&t| t >= 8.0 * h - 1e-12).collect();
    if ts.is_empty() {
        return Err(SqfnError::Usage("no scale in {L/32, L/16, L/8} reaches 8h; increase --size".into()));
    }
    let corpus = cfg.smooth(6);
    let fine = GridSpec::new(grid.dim(), 2 * grid.size(), l)?;
    let rows = par_map(&corpus, |m| {
        let (f, ff) = (m.sample(grid)?, m.sample(&fine)?);
        ts.iter()
            .map(|&t| Ok((verify_representation(&f, t)?, verify_representation(&ff, t)?)))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut report = ExperimentReport::new("representation");
    report.grid(grid).param("scales", ts.clone()).param("refined_size", fine.size());
    let mut worst: f64 = 0.0;
    let mut min_factor = f64::INFINITY;
    for (m, per_t) in corpus.iter().zip(&rows) {
        for (c, f) in per_t {
            let factor_s = c.sphere / f.sphere;
            let factor_b = c.ball / f.ball;
            worst = worst.max(c.sphere).max(c.ball);
            min_factor = min_factor.min(factor_s).min(factor_b);
            report.item(
                ReportItem::new(&m.name)
                    .param("generator", describe(&m.generator))
                    .param("t", c.t)
                    .value("sphere_residual", c.sphere)
                    .value("ball_residual", c.ball)
                    .value("sphere_residual_refined", f.sphere)
                    .value("ball_residual_refined", f.ball)
                    .value("sphere_reduction", factor_s)
                    .value("ball_reduction", factor_b),
            );
        }
    }
    report.check("max relative residual", worst, Bound::AtMost, REPRESENTATION_TOL);
    report.check("min reduction when N doubles", min_factor, Bound::AtLeast, REFINEMENT_MIN);
    Ok(report)
}

fn isometry_suite(cfg: &SuiteConfig, grid: &GridSpec) -> Result<ExperimentReport> {
    let scales = cfg.scales_from(grid, grid.spacing())?;
    let corpus = bandlimited_corpus(grid, cfg.seed, cfg.corpus_size.unwrap_or(5));
    let fields = sample_all(&corpus, grid)?;
    let est = estimate_isometry_constants(&fields, &scales)?;
    let mut report = ExperimentReport::new("isometry");
    report.grid(grid).scales(&scales).param("corpus_size", corpus.len());
    for (k, m) in corpus.iter().enumerate() {
        report.item(
            ReportItem::new(&m.name)
                .param("generator", describe(&m.generator))
                .value("ratio_t", est.ratios_t[k])
                .value("ratio_s", est.ratios_s[k]),
        );
    }
    report
        .constant("c1", est.c1)
        .constant("c2", est.c2)
        .constant("c1_profile", est.c1_profile)
        .constant("c2_profile", est.c2_profile)
        .constant("spread_t", est.spread_t)
        .constant("spread_s", est.spread_s);
    if grid.dim() == 1 {
        let (q1, q2) = closed_form_constants_1d();
        report.constant("c1_sq_closed_form", q1).constant("c2_sq_closed_form", q2);
        report.check("|C1^2 profile / closed form - 1|", (est.c1_profile.powi(2) / q1 - 1.0).abs(), Bound::AtMost, PROFILE_AGREEMENT_TOL);
    }
    report.check("spread T ratios", est.spread_t, Bound::AtMost, ISOMETRY_SPREAD_TOL);
    report.check("spread S ratios", est.spread_s, Bound::AtMost, ISOMETRY_SPREAD_TOL);
    report.check("|C1 ratio / profile - 1|", est.agreement_t(), Bound::AtMost, PROFILE_AGREEMENT_TOL);
    report.check("|C2 ratio / profile - 1|", est.agreement_s(), Bound::AtMost, PROFILE_AGREEMENT_TOL);
    Ok(report)
}

fn pointwise_suite(cfg: &SuiteConfig, grid: &GridSpec) -> Result<ExperimentReport> {
    let scales = cfg.scales(grid)?;
    let corpus = cfg.smooth(6);
    let checks = par_map(&corpus, |m| verify_pointwise_inequality(&m.sample(grid)?, &scales))?;
    let mut report = ExperimentReport::new("pointwise");
    report.grid(grid).scales(&scales).param("slack", POINTWISE_SLACK);
    let n = grid.dim() as f64;
    report.constant("stated_constant", n / (n + 2.0)).constant("sqrt_constant", (n / (n + 2.0)).sqrt());
    for (m, c) in corpus.iter().zip(&checks) {
        report.item(
            ReportItem::new(&m.name)
                .param("generator", describe(&m.generator))
                .value("stated_excess", c.stated_excess)
                .value("sqrt_excess", c.sqrt_excess)
                .value("stated_violations", c.stated_violations as f64)
                .value("sqrt_violations", c.sqrt_violations as f64)
                .value("max_s_over_t", c.max_ratio)
                .value("max_trunc", c.max_trunc),
        );
    }
    let total = |f: fn(&PointwiseCheck) -> usize| checks.iter().map(f).sum::<usize>() as f64;
    report.check("violations of S <= n/(n+2) T + trunc", total(|c| c.stated_violations), Bound::AtMost, 0.0);
    report.check("violations of S <= sqrt(n/(n+2)) T + trunc", total(|c| c.sqrt_violations), Bound::AtMost, 0.0);
    Ok(report)
}

fn parts_suite(cfg: &SuiteConfig, grid: &GridSpec) -> Result<ExperimentReport> {
    let h = grid.spacing();
    let eps = cfg.t_min.unwrap_or(8.0 * h);
    let big_t = cfg.t_max.unwrap_or(grid.length() / 8.0);
    let corpus = cfg.smooth(1);
    // The identity compares two quadratures of the same integrals, so its
    // residual is the O(M^-2) midpoint error; M = 32 keeps it near 1e-4.
    let per_octave = cfg.per_octave.unwrap_or(32);
    let points = parts_probe_points(grid);
    let mut report = ExperimentReport::new("parts");
    report
        .grid(grid)
        .param("eps", eps)
        .param("T", big_t)
        .param("scales_per_octave", per_octave);
    let mut worst: f64 = 0.0;
    for m in &corpus {
        let f = m.sample(grid)?;
        let res = parts_identity_at(&f, &points, eps, big_t, per_octave)?;
        for (&p, r) in points.iter().zip(&res) {
            worst = worst.max(r.residual);
            let x = grid.point(p);
            report.item(
                ReportItem::new(&m.name)
                    .param("generator", describe(&m.generator))
                    .param("x", x[..grid.dim()].to_vec())
                    .value("lhs", r.lhs)
                    .value("boundary", r.boundary)
                    .value("cross", r.cross)
                    .value("residual", r.residual),
            );
        }
    }
    report.check("max relative residual", worst, Bound::AtMost, PARTS_TOL);
    Ok(report)
}

fn polarization_suite(cfg: &SuiteConfig, grid: &GridSpec) -> Result<ExperimentReport> {
    let scales = cfg.scales_from(grid, grid.spacing())?;
    let corpus = bandlimited_corpus(grid, cfg.seed, 2);
    let g = corpus[0].sample(grid)?;
    let h = corpus[1].sample(grid)?;
    let k = crate::corpus::isometry_band(grid) as i64;
    // Wave number K + 1 lies outside the band of g, so ⟨g, wave⟩ = 0.
    let wave = sqfn_core::field::sample(grid, &sqfn_core::Generator::PlaneWave { m: [k + 1, 0, 0] })?;
    let (c1, _) = profile_constants(grid, &scales)?;
    let c1_sq = c1 * c1;
    let diag = verify_polarization(&g, &g, &scales, c1_sq)?;
    let cross = verify_polarization(&g, &h, &scales, c1_sq)?;
    let orth = verify_polarization(&g, &wave, &scales, c1_sq)?;
    let doubled = verify_polarization(&g.scaled(2.0), &h, &scales, c1_sq)?;
    let bilinear = (doubled.lhs - 2.0 * cross.lhs).abs() / (2.0 * cross.lhs.abs()).max(f64::MIN_POSITIVE);
    let mut report = ExperimentReport::new("polarization");
    report.grid(grid).scales(&scales).constant("c1_profile", c1);
    for (name, r) in [("diagonal", diag), ("cross", cross), ("orthogonal_wave", orth)] {
        report.item(
            ReportItem::new(name)
                .value("lhs", r.lhs)
                .value("rhs", r.rhs)
                .value("scale", r.scale)
                .value("residual", r.residual),
        );
    }
    report.item(ReportItem::new("doubled").value("lhs", doubled.lhs).value("bilinearity", bilinear));
    report.check("diagonal residual", diag.residual, Bound::AtMost, POLARIZATION_TOL);
    report.check("cross residual", cross.residual, Bound::AtMost, POLARIZATION_TOL);
    report.check("orthogonal residual", orth.residual, Bound::AtMost, POLARIZATION_TOL);
    report.check("bilinearity", bilinear, Bound::AtMost, BILINEARITY_TOL);
    Ok(report)
}

fn mollifier_suite(cfg: &SuiteConfig, grid: &GridSpec) -> Result<ExperimentReport> {
    let scales = cfg.scales(grid)?;
    let h = grid.spacing();
    let corpus = cfg.smooth(6);
    let checks = par_map(&corpus, |m| {
        let f = m.sample(grid)?;
        [4.0 * h, 8.0 * h]
            .iter()
            .map(|&e| verify_mollifier_domination(&f, e, &scales))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut report = ExperimentReport::new("mollifier");
    report.grid(grid).scales(&scales).param("slack", POINTWISE_SLACK);
    let mut violations = 0;
    for (m, per_eps) in corpus.iter().zip(&checks) {
        for c in per_eps {
            violations += c.violations;
            report.item(
                ReportItem::new(&m.name)
                    .param("generator", describe(&m.generator))
                    .param("eps", c.eps)
                    .value("excess_t", c.excess_t)
                    .value("excess_s", c.excess_s)
                    .value("violations", c.violations as f64)
                    .value("distance_t", c.distance_t)
                    .value("distance_s", c.distance_s),
            );
        }
    }
    report.check("violations", violations as f64, Bound::AtMost, 0.0);
    Ok(report)
}

fn maximal_suite(cfg: &SuiteConfig, grid: &GridSpec) -> Result<ExperimentReport> {
    let scales = cfg.scales(grid)?;
    let corpus = cfg.smooth(6);
    let rel = par_map(&corpus, |m| verify_maximal(&m.sample(grid)?, &scales))?;
    let mut report = ExperimentReport::new("maximal");
    report.grid(grid).scales(&scales);
    for (m, r) in corpus.iter().zip(&rel) {
        report.item(ReportItem::new(&m.name).param("generator", describe(&m.generator)).value("discrepancy", *r));
    }
    report.check("max relative discrepancy", rel.iter().copied().fold(0.0, f64::max), Bound::AtMost, MAXIMAL_TOL);
    Ok(report)
}

fn equivalence_suite(cfg: &SuiteConfig, grid: &GridSpec) -> Result<ExperimentReport> {
    let scales = cfg.scales(grid)?;
    let corpus = cfg.smooth(10);
    if corpus.len() < 10 {
        return Err(SqfnError::Usage("equivalence needs a corpus of 10 fields".into()));
    }
    let weight = cfg.alpha.map(WeightSpec::new);
    let constants = if weight.is_none() && cfg.p_list.contains(&2.0) {
        Some(profile_constants(grid, &isometry_scales(grid, cfg.scales_per_octave())?)?)
    } else {
        None
    };
    norm_equivalence_sweep(&corpus, grid, &cfg.p_list, weight.as_ref(), &scales, constants)
}
