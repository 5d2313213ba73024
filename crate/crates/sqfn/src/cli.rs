//! `sqfn` command-line front end.
//!
//! Precedence: explicit flags, then `--config` entries, then defaults.
//! Exit codes: 0 all checks pass, 1 a check failed (the report is still
//! written), 2 usage, configuration or IO error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use sqfn_core::field::lp_norm;
use sqfn_core::maximal::{hl_maximal, spherical_maximal};
use sqfn_core::spectral::{half_laplacian, riesz};
use sqfn_core::squarefn::{mu_omega, sato_sigma, square_s, square_s_tilde, square_t, square_t_tilde, square_w};
use sqfn_core::weights::weighted_lp_norm;
use sqfn_core::{GridSpec, Omega, ScalarField, ScaleGrid, WeightSpec};

use crate::config::parse_config;
use crate::corpus::parse_generator;
use crate::error::{Result, SqfnError};
use crate::io::{read_field, write_field};
use crate::lab::{run_suite, Suite, SuiteConfig};
use crate::report::ExperimentReport;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "sqfn", version, about = "Square functions and Sobolev-norm experiments on periodic grids")]
pub struct Cli {
    /// Worker threads (default: available cores). `--threads 1` gives byte-identical reports.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// `key = value` file overriding defaults; explicit flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Record wall-clock time in the report and print it to stderr.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a generator on a grid and write the field.
    Gen(GenArgs),
    /// Apply an operator to a field file.
    Apply(ApplyArgs),
    /// Run a verification suite and write its report.
    Verify(VerifyArgs),
    /// Run the norm-equivalence sweep.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub size: Option<usize>,
    /// Box side length L.
    #[arg(long = "box")]
    pub length: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ScaleArgs {
    #[arg(long)]
    pub tmin: Option<f64>,
    #[arg(long)]
    pub tmax: Option<f64>,
    #[arg(long)]
    pub scales_per_octave: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Generator, e.g. `gaussian:1@0.3,-0.2`, `bump:2`, `plane:1,0`, `bandlimited:8`.
    #[arg(long)]
    pub gen: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    /// T, S, W, Ttilde, Stilde, muomega, sigma, riesz, halflap, sphmax or hlmax.
    #[arg(long)]
    pub op: Option<String>,
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Output field; riesz writes one file per component with suffix `_a`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Box side length, required for CSV input.
    #[arg(long = "box")]
    pub length: Option<f64>,
    #[command(flatten)]
    pub scales: ScaleArgs,
    /// Report the L^p norm of the output on stdout.
    #[arg(long)]
    pub p: Option<f64>,
    /// Power weight |x|^α for the reported norm.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Angular factor for muomega/sigma: sign, quadrupole or coord:<a>.
    #[arg(long)]
    pub omega: Option<String>,
    /// ε of Sato's kernel for sigma.
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// representation, isometry, pointwise, parts, polarization, mollifier or maximal.
    #[arg(long)]
    pub suite: Option<String>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub scales: ScaleArgs,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub corpus_size: Option<usize>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// csv or json (default: from the report extension, else json).
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Only `equivalence`.
    #[arg(long)]
    pub suite: Option<String>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub scales: ScaleArgs,
    /// Comma-separated exponents, e.g. 1.5,2,3.
    #[arg(long)]
    pub p_list: Option<String>,
    /// Weight exponent α, or `none`.
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub corpus_size: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<String>,
}

const CONFIG_KEYS: [&str; 22] = [
    "threads", "timing", "dim", "size", "box", "gen", "seed", "out", "op", "in", "tmin", "tmax",
    "scales-per-octave", "p", "alpha", "omega", "epsilon", "suite", "corpus-size", "report", "format", "p-list",
];

/// Flag values backed by the config file.
struct Settings {
    config: BTreeMap<String, String>,
}

impl Settings {
    fn load(path: Option<&Path>) -> Result<Self> {
        let config = match path {
            Some(p) => parse_config(&fs::read_to_string(p).map_err(SqfnError::io(p))?)?,
            None => BTreeMap::new(),
        };
        if let Some(k) = config.keys().find(|k| !CONFIG_KEYS.contains(&k.as_str())) {
            return Err(SqfnError::Usage(format!("unknown config key {k:?}")));
        }
        Ok(Self { config })
    }

    fn get<T: FromStr>(&self, key: &str, flag: Option<T>) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.config.get(key) {
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| SqfnError::Usage(format!("config value for {key:?} is invalid: {v:?}"))),
            None => Ok(None),
        }
    }

    fn or<T: FromStr>(&self, key: &str, flag: Option<T>, default: T) -> Result<T> {
        Ok(self.get(key, flag)?.unwrap_or(default))
    }

    fn required<T: FromStr>(&self, key: &str, flag: Option<T>) -> Result<T> {
        self.get(key, flag)?.ok_or_else(|| SqfnError::Usage(format!("--{key} is required")))
    }

    fn grid(&self, g: &GridArgs) -> Result<(usize, usize, f64)> {
        Ok((
            self.or("dim", g.dim, 2)?,
            self.or("size", g.size, 256)?,
            self.or("box", g.length, 8.0)?,
        ))
    }

    fn timing(&self, flag: bool) -> Result<bool> {
        Ok(flag || self.or("timing", None, false)?)
    }
}

/// Parses argv (including the program name) and runs; returns the exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// Runs a parsed command; `Ok(false)` means a check failed.
pub fn run(cli: Cli) -> Result<bool> {
    let settings = Settings::load(cli.config.as_deref())?;
    let threads: Option<usize> = settings.get("threads", cli.threads)?;
    let timing = settings.timing(cli.timing)?;
    let body = || match &cli.command {
        Command::Gen(a) => gen(&settings, a).map(|_| true),
        Command::Apply(a) => apply(&settings, a).map(|_| true),
        Command::Verify(a) => verify(&settings, a, timing),
        Command::Sweep(a) => sweep(&settings, a, timing),
    };
    match threads {
        Some(0) => Err(SqfnError::Usage("--threads must be at least 1".into())),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| SqfnError::Usage(e.to_string()))?
            .install(body),
        None => body(),
    }
}

fn gen(s: &Settings, a: &GenArgs) -> Result<()> {
    let (n, size, l) = s.grid(&a.grid)?;
    let grid = GridSpec::new(n, size, l)?;
    let seed = s.or("seed", a.seed, 1)?;
    let generator = parse_generator(&s.required::<String>("gen", a.gen.clone())?, seed)?;
    let f = sqfn_core::field::sample(&grid, &generator)?;
    write_field(&s.required::<PathBuf>("out", a.out.clone())?, &f)
}

fn parse_omega(text: &str) -> Result<Omega> {
    Ok(match text {
        "sign" => Omega::Sign,
        "quadrupole" => Omega::Quadrupole,
        _ => match text.strip_prefix("coord:").map(str::parse) {
            Some(Ok(a)) => Omega::Coordinate(a),
            _ => return Err(SqfnError::Usage(format!("unknown omega {text:?}"))),
        },
    })
}

fn apply_scales(s: &Settings, a: &ScaleArgs, grid: &GridSpec) -> Result<ScaleGrid> {
    let default = ScaleGrid::default_for(grid);
    let t_min = s.or("tmin", a.tmin, default.t_min())?;
    let t_max = s.or("tmax", a.tmax, default.t_max())?;
    let m = s.or("scales-per-octave", a.scales_per_octave, default.per_octave())?;
    Ok(ScaleGrid::new(grid, t_min, t_max, m)?)
}

fn with_suffix(path: &Path, a: usize) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let name = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_{a}.{ext}"),
        None => format!("{stem}_{a}"),
    };
    path.with_file_name(name)
}

fn apply(s: &Settings, a: &ApplyArgs) -> Result<()> {
    let op: String = s.required("op", a.op.clone())?;
    let input: PathBuf = s.required("in", a.input.clone())?;
    let out: PathBuf = s.required("out", a.out.clone())?;
    let f = read_field(&input, s.get("box", a.length)?)?;
    let grid = *f.grid();
    let scales = || apply_scales(s, &a.scales, &grid);
    let omega = || -> Result<Omega> { parse_omega(&s.or("omega", a.omega.clone(), "sign".to_string())?) };
    let outputs: Vec<ScalarField> = match op.as_str() {
        "T" => vec![square_t(&f, &scales()?)?],
        "S" => vec![square_s(&f, &scales()?)?],
        "W" => vec![square_w(&f, &scales()?)?],
        "Ttilde" => vec![square_t_tilde(&f, &scales()?)?],
        "Stilde" => vec![square_s_tilde(&f, &scales()?)?],
        "muomega" => vec![mu_omega(&omega()?, &f, &scales()?)?],
        "sigma" => vec![sato_sigma(&omega()?, s.or("epsilon", a.epsilon, 0.5)?, &f, &scales()?)?],
        "riesz" => riesz(&f).into_components(),
        "halflap" => vec![half_laplacian(&f)],
        "sphmax" => vec![spherical_maximal(&f, &scales()?)?],
        "hlmax" => vec![hl_maximal(&f, &scales()?)?],
        _ => return Err(SqfnError::Usage(format!("unknown operator {op:?}"))),
    };
    if outputs.len() == 1 {
        write_field(&out, &outputs[0])?;
    } else {
        for (k, g) in outputs.iter().enumerate() {
            write_field(&with_suffix(&out, k), g)?;
        }
    }
    let p: Option<f64> = s.get("p", a.p)?;
    let alpha: Option<f64> = s.get("alpha", a.alpha)?;
    let norms = outputs
        .iter()
        .map(|g| match (p, alpha) {
            (Some(p), Some(al)) => Ok(Some(weighted_lp_norm(g, &WeightSpec::new(al), p)?)),
            (Some(p), None) => Ok(Some(lp_norm(g, p)?)),
            _ => Ok(None),
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = json!({
        "op": op,
        "max_abs": outputs.iter().map(|g| g.max_abs()).collect::<Vec<_>>(),
        "p": p,
        "alpha": alpha,
        "norm": norms,
    });
    println!("{summary}");
    Ok(())
}

fn suite_config(
    s: &Settings,
    grid: &GridArgs,
    scales: &ScaleArgs,
    seed: Option<u64>,
    corpus_size: Option<usize>,
) -> Result<SuiteConfig> {
    let (dim, size, length) = s.grid(grid)?;
    let defaults = SuiteConfig::default();
    Ok(SuiteConfig {
        dim,
        size,
        length,
        seed: s.or("seed", seed, defaults.seed)?,
        t_min: s.get("tmin", scales.tmin)?,
        t_max: s.get("tmax", scales.tmax)?,
        per_octave: s.get("scales-per-octave", scales.scales_per_octave)?,
        corpus_size: s.get("corpus-size", corpus_size)?,
        ..defaults
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ReportFormat {
    Json,
    Csv,
}

fn report_format(s: &Settings, flag: Option<String>, path: Option<&Path>) -> Result<ReportFormat> {
    match s.get::<String>("format", flag)?.as_deref() {
        Some("json") => Ok(ReportFormat::Json),
        Some("csv") => Ok(ReportFormat::Csv),
        Some(other) => Err(SqfnError::Usage(format!("unknown format {other:?} (csv or json)"))),
        None => Ok(match path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some("csv") => ReportFormat::Csv,
            _ => ReportFormat::Json,
        }),
    }
}

fn emit(
    s: &Settings,
    mut report: ExperimentReport,
    started: Instant,
    timing: bool,
    path: Option<PathBuf>,
    format: Option<String>,
) -> Result<bool> {
    let path: Option<PathBuf> = s.get("report", path)?;
    let format = report_format(s, format, path.as_deref())?;
    if timing {
        let secs = started.elapsed().as_secs_f64();
        report.wall_clock_s = Some(secs);
        eprintln!("{}: {secs:.3} s", report.experiment);
    }
    let text = match format {
        ReportFormat::Json => report.to_json()?,
        ReportFormat::Csv => report.to_csv()?,
    };
    match path {
        Some(p) => fs::write(&p, text).map_err(SqfnError::io(&p))?,
        None => print!("{text}"),
    }
    for c in report.failed_checks() {
        eprintln!("check failed: {} = {} (limit {:?} {})", c.name, c.value, c.bound, c.limit);
    }
    Ok(report.pass)
}

fn verify(s: &Settings, a: &VerifyArgs, timing: bool) -> Result<bool> {
    let started = Instant::now();
    let name: String = s.required("suite", a.suite.clone())?;
    let suite = Suite::parse(&name)
        .filter(|x| *x != Suite::Equivalence)
        .ok_or_else(|| SqfnError::Usage(format!("unknown suite {name:?}; expected one of {}", Suite::VERIFY.join(", "))))?;
    let cfg = suite_config(s, &a.grid, &a.scales, a.seed, a.corpus_size)?;
    let report = run_suite(suite, &cfg)?;
    emit(s, report, started, timing, a.report.clone(), a.format.clone())
}

fn parse_p_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|p| p.trim().parse().map_err(|_| SqfnError::Usage(format!("bad exponent {p:?}"))))
        .collect()
}

fn sweep(s: &Settings, a: &SweepArgs, timing: bool) -> Result<bool> {
    let started = Instant::now();
    let name = s.or("suite", a.suite.clone(), "equivalence".to_string())?;
    if name != "equivalence" {
        return Err(SqfnError::Usage(format!("unknown sweep suite {name:?}; expected equivalence")));
    }
    let mut cfg = suite_config(s, &a.grid, &a.scales, a.seed, a.corpus_size)?;
    if let Some(list) = s.get::<String>("p-list", a.p_list.clone())? {
        cfg.p_list = parse_p_list(&list)?;
    }
    cfg.alpha = match s.get::<String>("alpha", a.alpha.clone())?.as_deref() {
        None | Some("none") => None,
        Some(v) => Some(v.parse().map_err(|_| SqfnError::Usage(format!("bad alpha {v:?}")))?),
    };
    let report = run_suite(Suite::Equivalence, &cfg)?;
    emit(s, report, started, timing, a.report.clone(), a.format.clone())
}
