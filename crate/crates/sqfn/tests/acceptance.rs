//! Acceptance suite: one PASS/FAIL line per criterion with the measured
//! quantities and the wall-clock time against its budget.
//!
//! Criteria 5 and 6a are known to be unattainable (see README); they are
//! evaluated as stated and reported, and only an unexpected failure makes
//! the run exit non-zero.

use std::process::ExitCode;
use std::time::Instant;

use sqfn::corpus::{bandlimited_corpus, smooth_corpus};
use sqfn::lab::{
    closed_form_constants_1d, estimate_isometry_constants, isometry_scales, norm_equivalence_sweep,
    parts_identity_at, parts_probe_points, profile_constants, run_suite, verify_pointwise_inequality, Suite,
    SuiteConfig,
};
use sqfn::report::spread_factor;
use sqfn::Result;
use sqfn_core::averaging::{ball_mean, sphere_mean};
use sqfn_core::field::{lp_norm, sample};
use sqfn_core::spectral::{gradient, half_laplacian, inverse_transform, riesz, transform};
use sqfn_core::squarefn::{
    default_angular, family, second_difference_family, square_d_fullspace, square_s, square_t, square_t_1d,
    FamilyKind,
};
use sqfn_core::weights::{ap_constant, ap_divergence_probe, BallFamily};
use sqfn_core::{Generator, GridSpec, ScalarField, ScaleGrid, WeightSpec};

struct Outcome {
    id: &'static str,
    title: &'static str,
    pass: bool,
    expected_red: bool,
    detail: String,
}

fn criterion(
    id: &'static str,
    title: &'static str,
    budget_s: f64,
    expected_red: bool,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> Outcome {
    let start = Instant::now();
    let (ok, detail) = match body() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let secs = start.elapsed().as_secs_f64();
    let in_budget = secs < budget_s;
    let pass = ok && in_budget;
    let note = if expected_red { " [expected red]" } else { "" };
    println!(
        "{} {id:>3} {title}: {detail} ({secs:.1} s / budget {budget_s:.0} s{}){note}",
        if pass { "PASS" } else { "FAIL" },
        if in_budget { "" } else { ", over budget" },
    );
    Outcome { id, title, pass, expected_red, detail }
}

fn max_abs_diff(a: &ScalarField, b: &ScalarField) -> f64 {
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn spectral_exactness() -> Result<(bool, String)> {
    let (mut round, mut parseval, mut div, mut grad) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for n in [1, 2] {
        let grid = GridSpec::new(n, 256, 8.0)?;
        for seed in 0..20 {
            let f = sample(&grid, &Generator::RandomBandlimited { k: 32, seed })?;
            let spec = transform(&f);
            round = round.max(max_abs_diff(&inverse_transform(&spec), &f));
            let energy: f64 = f.values().iter().map(|v| v * v).sum::<f64>() * grid.cell_volume();
            let spectral: f64 = spec.coefficients().iter().map(|c| c.norm_sqr()).sum::<f64>() / grid.volume();
            parseval = parseval.max((energy - spectral).abs() / energy);
            let half = half_laplacian(&f);
            let g = gradient(&f);
            let mut rdg = ScalarField::zeros(grid);
            for a in 0..n {
                rdg = rdg.add(riesz(g.component(a)).component(a))?;
            }
            div = div.max(max_abs_diff(&rdg, &half) / half.max_abs());
            let rh = riesz(&half);
            for a in 0..n {
                grad = grad.max(max_abs_diff(rh.component(a), &g.component(a).scaled(-1.0)) / g.magnitude().max_abs());
            }
        }
    }
    let ok = round <= 1e-12 && parseval <= 1e-12 && div <= 1e-10 && grad <= 1e-10;
    Ok((ok, format!("round trip {round:.1e}, Parseval {parseval:.1e}, R·∇f {div:.1e}, R(−Δ)^½f {grad:.1e}")))
}

fn representation() -> Result<(bool, String)> {
    let r = run_suite(Suite::Representation, &SuiteConfig::default())?;
    let worst = r.checks[0].value;
    let factor = r.checks[1].value;
    Ok((r.pass, format!("max residual {worst:.2e} (≤ 1e-3), min reduction at 2N {factor:.2} (≥ 1.5)")))
}

fn quadratic_moments() -> Result<(bool, String)> {
    let mut moment: f64 = 0.0;
    let mut ratio: f64 = 0.0;
    for (n, size, l) in [(1, 256, 8.0), (2, 256, 8.0), (3, 64, 4.0)] {
        let grid = GridSpec::new(n, size, l)?;
        let h = grid.spacing();
        let f = sample(&grid, &Generator::QuadraticWindow { radius: l / 3.3 })?;
        let o = grid.origin();
        let nf = n as f64;
        let scales = ScaleGrid::new(&grid, h, 4.0 * h, 2)?;
        for &t in scales.nodes() {
            let ds = f.values()[o] - sphere_mean(&f, t)?.values()[o];
            let db = f.values()[o] - ball_mean(&f, t)?.values()[o];
            let (es, eb) = (-t * t, -nf * t * t / (nf + 2.0));
            moment = moment.max(((ds - es) / es).abs()).max(((db - eb) / eb).abs());
            let target = (nf / (nf + 2.0)).powi(2);
            ratio = ratio.max(((db / ds).powi(2) - target).abs() / target);
        }
    }
    Ok((
        moment <= 1e-3 && ratio <= 1e-3,
        format!("moment error {moment:.1e}, integrand ratio error {ratio:.1e} (≤ 1e-3)"),
    ))
}

fn isometry() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, size, l) in [(1, 4096, 32.0), (2, 256, 8.0)] {
        let grid = GridSpec::new(n, size, l)?;
        let scales = isometry_scales(&grid, 8)?;
        let fields = bandlimited_corpus(&grid, 1, 5)
            .iter()
            .map(|m| m.sample(&grid))
            .collect::<Result<Vec<_>>>()?;
        let est = estimate_isometry_constants(&fields, &scales)?;
        ok &= est.spread_t <= 0.01 && est.spread_s <= 0.01;
        ok &= est.agreement_t() <= 0.02 && est.agreement_s() <= 0.02;
        let mut line = format!(
            "n={n}: C1 {:.4}/{:.4} C2 {:.4}/{:.4} spread {:.1e}/{:.1e}",
            est.c1, est.c1_profile, est.c2, est.c2_profile, est.spread_t, est.spread_s
        );
        if n == 1 {
            let (q1, q2) = closed_form_constants_1d();
            let d1 = (est.c1_profile.powi(2) / q1 - 1.0).abs();
            let d2 = (est.c2_profile.powi(2) / q2 - 1.0).abs();
            ok &= d1 <= 0.02 && d2 <= 0.02;
            line += &format!(" closed-form C1² {q1:.5} ({d1:.1e}) C2² {q2:.5} ({d2:.1e})");
        }
        parts.push(line);
    }
    Ok((ok, parts.join("; ")))
}

fn equivalence_grid() -> Result<(GridSpec, ScaleGrid)> {
    let grid = GridSpec::new(2, 256, 8.0)?;
    let scales = ScaleGrid::new(&grid, 8.0 * grid.spacing(), 2.0, 8)?;
    Ok((grid, scales))
}

fn p2_equivalence() -> Result<(bool, String)> {
    let (grid, scales) = equivalence_grid()?;
    let constants = profile_constants(&grid, &isometry_scales(&grid, 8)?)?;
    let r = norm_equivalence_sweep(&smooth_corpus(8.0, 10), &grid, &[2.0], None, &scales, Some(constants))?;
    let ratios = |key: &str| -> Vec<f64> { r.items.iter().map(|i| i.values[key]).collect() };
    let (rt, rs) = (ratios("ratio_t"), ratios("ratio_s"));
    let range = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(0.0, f64::max);
        format!("[{lo:.3}, {hi:.3}]")
    };
    Ok((
        r.pass,
        format!(
            "T/∇ in {} vs C1 {:.4}, S/∇ in {} vs C2 {:.4}, max deviation {:.1}% / {:.1}% (≤ 2%)",
            range(&rt),
            constants.0,
            range(&rs),
            constants.1,
            100.0 * r.checks[1].value,
            100.0 * r.checks[2].value
        ),
    ))
}

struct PointwiseSummary {
    stated: usize,
    root: usize,
    max_ratio: f64,
    root_excess: f64,
}

fn pointwise_summary() -> Result<PointwiseSummary> {
    let mut s = PointwiseSummary { stated: 0, root: 0, max_ratio: 0.0, root_excess: f64::NEG_INFINITY };
    for (n, size) in [(1, 1024), (2, 256)] {
        let grid = GridSpec::new(n, size, 8.0)?;
        let scales = ScaleGrid::new(&grid, 8.0 * grid.spacing(), 2.0, 8)?;
        for m in smooth_corpus(8.0, 6) {
            let c = verify_pointwise_inequality(&m.sample(&grid)?, &scales)?;
            s.stated += c.stated_violations;
            s.root += c.sqrt_violations;
            s.max_ratio = s.max_ratio.max(c.max_ratio);
            s.root_excess = s.root_excess.max(c.sqrt_excess);
        }
    }
    Ok(s)
}

fn parts_identity() -> Result<(bool, String)> {
    let grid = GridSpec::new(2, 256, 8.0)?;
    let f = smooth_corpus(8.0, 1)[0].sample(&grid)?;
    let points = parts_probe_points(&grid);
    let h = grid.spacing();
    let res = parts_identity_at(&f, &points, 8.0 * h, 1.0, 32)?;
    let coarse = parts_identity_at(&f, &points, 8.0 * h, 1.0, 16)?;
    let worst = res.iter().map(|r| r.residual).fold(0.0, f64::max);
    let worst_coarse = coarse.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok((
        worst <= 1e-3,
        format!("max residual at 5 points {worst:.1e} with M=32 ({worst_coarse:.1e} with M=16) (≤ 1e-3)"),
    ))
}

fn one_dimensional() -> Result<(bool, String)> {
    let grid = GridSpec::new(1, 4096, 8.0)?;
    let scales = ScaleGrid::default_for(&grid);
    let mut nodewise: f64 = 0.0;
    let mut full: f64 = 0.0;
    for m in smooth_corpus(8.0, 6) {
        let f = m.sample(&grid)?;
        let second = second_difference_family(&f, &scales)?;
        let sphere = family(FamilyKind::SphereDeviation, &f, &scales)?;
        for (a, b) in second.fields().iter().zip(sphere.fields()) {
            nodewise = nodewise.max((lp_norm(a, 2.0)? / lp_norm(b, 2.0)? - 2.0).abs());
        }
        let t1 = square_t_1d(&f, &scales)?;
        let d = square_d_fullspace(&f, &scales, default_angular(1))?;
        full = full.max(max_abs_diff(&d, &t1.scaled(2f64.sqrt())) / d.max_abs());
    }
    Ok((
        nodewise <= 1e-12 && full <= 1e-3,
        format!("node-wise ‖Δ²f‖/‖f − f_S‖ − 2 {nodewise:.1e} (≤ 1e-12), D vs √2·T_1d {full:.1e} (≤ 1e-3)"),
    ))
}

fn mollifier() -> Result<(bool, String)> {
    let r = run_suite(Suite::Mollifier, &SuiteConfig::default())?;
    let worst = r
        .items
        .iter()
        .map(|i| i.values["excess_t"].max(i.values["excess_s"]))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok((r.pass, format!("violations {}, max K(f_ε) − (Kf)∗φ_ε {worst:.1e} (slack 1e-8)", r.checks[0].value)))
}

fn maximal() -> Result<(bool, String)> {
    let r = run_suite(Suite::Maximal, &SuiteConfig::default())?;
    Ok((r.pass, format!("max relative discrepancy {:.1e} (≤ 1e-3)", r.checks[0].value)))
}

fn weighted() -> Result<(bool, String)> {
    let (grid, scales) = equivalence_grid()?;
    let w = WeightSpec::new(0.5);
    let r = norm_equivalence_sweep(&smooth_corpus(8.0, 10), &grid, &[2.0], Some(&w), &scales, None)?;
    let rt: Vec<f64> = r.items.iter().map(|i| i.values["ratio_t"]).collect();
    let rs: Vec<f64> = r.items.iter().map(|i| i.values["ratio_s"]).collect();
    let finite = rt.iter().chain(&rs).all(|v| v.is_finite() && *v > 0.0);
    let (ft, fs) = (spread_factor(&rt), spread_factor(&rs));
    let ap = ap_constant(&WeightSpec::new(0.0), 2.0, &grid, &BallFamily::default_for(&grid))?.value;
    let probe = ap_divergence_probe(&WeightSpec::new(-2.0), 2.0, 1, 8.0, &[64, 128, 256, 512])?;
    let ok = finite && ft <= 25.0 && fs <= 25.0 && ap == 1.0 && probe.diverges;
    Ok((
        ok,
        format!(
            "weighted spread T {ft:.2} S {fs:.2} (≤ 25), A_2 constant at α=0 {ap}, α=−2 growth per refinement {:.2} (flagged: {})",
            probe.min_growth, probe.diverges
        ),
    ))
}

fn quadrature_robustness() -> Result<(bool, String)> {
    let change = |a: f64, b: f64| (a / b - 1.0).abs();
    let norm = |f: &ScalarField| lp_norm(f, 2.0);
    let mut worst: f64 = 0.0;
    // Criteria 5 and 6: T and S on the smooth corpora.
    for (n, size, count) in [(2, 256, 10), (1, 1024, 6)] {
        let grid = GridSpec::new(n, size, 8.0)?;
        let coarse = ScaleGrid::new(&grid, 8.0 * grid.spacing(), 2.0, 8)?;
        let fine = coarse.refined(&grid)?;
        for m in smooth_corpus(8.0, count) {
            let f = m.sample(&grid)?;
            worst = worst.max(change(norm(&square_t(&f, &fine)?)?, norm(&square_t(&f, &coarse)?)?));
            worst = worst.max(change(norm(&square_s(&f, &fine)?)?, norm(&square_s(&f, &coarse)?)?));
        }
    }
    // Criterion 7: the 1-D operators.
    let grid = GridSpec::new(1, 4096, 8.0)?;
    let coarse = ScaleGrid::default_for(&grid);
    let fine = coarse.refined(&grid)?;
    for m in smooth_corpus(8.0, 6) {
        let f = m.sample(&grid)?;
        worst = worst.max(change(norm(&square_t_1d(&f, &fine)?)?, norm(&square_t_1d(&f, &coarse)?)?));
        worst = worst.max(change(
            norm(&square_d_fullspace(&f, &fine, 1)?)?,
            norm(&square_d_fullspace(&f, &coarse, 1)?)?,
        ));
    }
    Ok((worst <= 5e-3, format!("max relative change M=8→16 {:.3}% (≤ 0.5%)", 100.0 * worst)))
}

fn main() -> ExitCode {
    let start = Instant::now();
    println!("acceptance: {} criteria", 13);
    let mut outcomes = vec![
        criterion("1", "spectral exactness", 5.0, false, spectral_exactness),
        criterion("2", "representation identities", 60.0, false, representation),
        criterion("3", "quadratic moments", 30.0, false, quadratic_moments),
        criterion("4", "isometry constants", 120.0, false, isometry),
        criterion("5", "p = 2 equivalence on [8h, L/4]", 120.0, true, p2_equivalence),
    ];
    let mut summary = None;
    outcomes.push(criterion("6a", "S ≤ (n/(n+2))T + ε_trunc", 60.0, true, || {
        let s = pointwise_summary()?;
        let line = format!("{} violating points, max S/T {:.3}", s.stated, s.max_ratio);
        let ok = s.stated == 0;
        summary = Some(s);
        Ok((ok, line))
    }));
    outcomes.push(criterion("6b", "S ≤ sqrt(n/(n+2))T + ε_trunc", 60.0, false, || {
        let s = summary.as_ref().expect("6a ran");
        Ok((s.root == 0, format!("{} violating points, max excess {:.1e}", s.root, s.root_excess)))
    }));
    outcomes.push(criterion("6c", "integration-by-parts identity", 60.0, false, parts_identity));
    outcomes.push(criterion("7", "1-D consistency", 30.0, false, one_dimensional));
    outcomes.push(criterion("8", "mollifier domination", 60.0, false, mollifier));
    outcomes.push(criterion("9", "maximal representation", 60.0, false, maximal));
    outcomes.push(criterion("10", "weighted probes", 120.0, false, weighted));
    outcomes.push(criterion("11", "quadrature robustness", 240.0, false, quadrature_robustness));

    let green = outcomes.iter().filter(|o| o.pass).count();
    let unexpected: Vec<&Outcome> = outcomes.iter().filter(|o| !o.pass && !o.expected_red).collect();
    let surprise: Vec<&Outcome> = outcomes.iter().filter(|o| o.pass && o.expected_red).collect();
    println!(
        "acceptance: {green}/{} green, {} expected red, {} unexpected failures ({:.1} s)",
        outcomes.len(),
        outcomes.iter().filter(|o| o.expected_red && !o.pass).count(),
        unexpected.len(),
        start.elapsed().as_secs_f64()
    );
    for o in &surprise {
        println!("note: {} ({}) passed although expected red: {}", o.id, o.title, o.detail);
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
