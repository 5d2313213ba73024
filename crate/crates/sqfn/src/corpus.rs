//! Test-function corpora and the textual generator syntax shared by the
//! CLI and reports.
//!
//! Syntax: `gaussian:σ[@c0,c1,c2]`, `bump:r[@c…]`, `plane:m0[,m1[,m2]]`,
//! `bandlimited:K[,seed]`, `quadratic:R`, `constant:c`, and sums
//! `w*gen + w*gen` (terms separated by " + ").

use sqfn_core::{Generator, GridSpec, ScalarField};

use crate::error::{Result, SqfnError};

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusMember {
    pub name: String,
    pub generator: Generator,
}

impl CorpusMember {
    pub fn sample(&self, grid: &GridSpec) -> Result<ScalarField> {
        Ok(sqfn_core::field::sample(grid, &self.generator)?)
    }
}

fn floats(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| SqfnError::Usage(format!("bad number {x:?}"))))
        .collect()
}

fn center(s: Option<&str>) -> Result<[f64; 3]> {
    let mut c = [0.0; 3];
    if let Some(s) = s {
        let v = floats(s)?;
        if v.len() > 3 {
            return Err(SqfnError::Usage("center has more than 3 coordinates".into()));
        }
        c[..v.len()].copy_from_slice(&v);
    }
    Ok(c)
}

fn single(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| SqfnError::Usage(format!("bad number {s:?}")))
}

/// Parses the generator syntax; `seed` fills in a missing band-limited seed.
pub fn parse_generator(text: &str, seed: u64) -> Result<Generator> {
    let text = text.trim();
    if text.contains(" + ") {
        let terms = text
            .split(" + ")
            .map(|term| {
                let (w, g) = match term.split_once('*') {
                    Some((w, g)) => (single(w)?, g),
                    None => (1.0, term),
                };
                Ok((w, parse_generator(g, seed)?))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(Generator::Sum(terms));
    }
    let (name, args) = text.split_once(':').unwrap_or((text, ""));
    let (main, at) = match args.split_once('@') {
        Some((m, c)) => (m, Some(c)),
        None => (args, None),
    };
    let missing = || SqfnError::Usage(format!("generator {name:?} needs parameters"));
    Ok(match name {
        "gaussian" => Generator::Gaussian { sigma: single(main)?, center: center(at)? },
        "bump" => Generator::Bump { radius: single(main)?, center: center(at)? },
        "quadratic" => Generator::QuadraticWindow { radius: single(main)? },
        "constant" => Generator::Constant(single(main)?),
        "plane" => {
            if main.is_empty() {
                return Err(missing());
            }
            let mut m = [0i64; 3];
            for (a, x) in main.split(',').enumerate() {
                if a >= 3 {
                    return Err(SqfnError::Usage("plane wave has more than 3 components".into()));
                }
                m[a] = x.trim().parse().map_err(|_| SqfnError::Usage(format!("bad integer {x:?}")))?;
            }
            Generator::PlaneWave { m }
        }
        "bandlimited" => {
            let (k, s) = match main.split_once(',') {
                Some((k, s)) => (k, s.trim().parse().map_err(|_| SqfnError::Usage(format!("bad seed {s:?}")))?),
                None => (main, seed),
            };
            let k = k.trim().parse().map_err(|_| missing())?;
            Generator::RandomBandlimited { k, seed: s }
        }
        _ => return Err(SqfnError::Usage(format!("unknown generator {name:?}"))),
    })
}

/// Inverse of [`parse_generator`].
pub fn describe(g: &Generator) -> String {
    let at = |c: &[f64; 3]| {
        if c.iter().all(|&x| x == 0.0) {
            String::new()
        } else {
            format!("@{},{},{}", c[0], c[1], c[2])
        }
    };
    match g {
        Generator::Gaussian { sigma, center } => format!("gaussian:{sigma}{}", at(center)),
        Generator::Bump { radius, center } => format!("bump:{radius}{}", at(center)),
        Generator::PlaneWave { m } => format!("plane:{},{},{}", m[0], m[1], m[2]),
        Generator::RandomBandlimited { k, seed } => format!("bandlimited:{k},{seed}"),
        Generator::QuadraticWindow { radius } => format!("quadratic:{radius}"),
        Generator::Constant(c) => format!("constant:{c}"),
        Generator::Sum(terms) => terms
            .iter()
            .map(|(w, g)| format!("{w}*{}", describe(g)))
            .collect::<Vec<_>>()
            .join(" + "),
    }
}

/// Smooth decaying fields (Gaussians, bumps and their combinations), with
/// widths and centers proportional to the box so every member stays
/// admissible for any L. At most 10 members.
pub fn smooth_corpus(length: f64, count: usize) -> Vec<CorpusMember> {
    let s = length / 8.0;
    let c = |x: f64, y: f64, z: f64| [s * x, s * y, s * z];
    let gauss = |sigma: f64, center| Generator::Gaussian { sigma: s * sigma, center };
    let bump = |radius: f64, center| Generator::Bump { radius: s * radius, center };
    let all = [
        gauss(1.0, c(0.3, -0.2, 0.1)),
        gauss(0.8, c(0.0, 0.0, 0.0)),
        bump(2.0, c(0.0, 0.0, 0.0)),
        gauss(1.2, c(-0.4, 0.25, -0.15)),
        bump(2.5, c(0.3, 0.3, 0.0)),
        Generator::Sum(vec![(1.0, gauss(0.7, c(0.8, 0.0, 0.0))), (-0.6, gauss(0.9, c(-0.6, 0.4, 0.0)))]),
        gauss(0.6, c(-0.5, -0.5, 0.2)),
        bump(1.6, c(-0.6, 0.4, 0.0)),
        Generator::Sum(vec![(1.0, bump(1.5, c(0.7, 0.0, 0.0))), (0.8, bump(1.2, c(-0.9, -0.3, 0.0)))]),
        gauss(1.1, c(0.5, 0.6, -0.3)),
    ];
    all.into_iter()
        .take(count)
        .enumerate()
        .map(|(i, generator)| CorpusMember { name: format!("smooth{i}"), generator })
        .collect()
}

/// Band limit K used for isometry probes: wave numbers in (K/2, K] with
/// K = 2L puts |ξ| in (1, 2], capped below N/2.
pub fn isometry_band(grid: &GridSpec) -> usize {
    ((2.0 * grid.length()).round() as usize).clamp(2, grid.size() / 2 - 1)
}

/// `count` random band-limited fields with consecutive seeds.
pub fn bandlimited_corpus(grid: &GridSpec, seed: u64, count: usize) -> Vec<CorpusMember> {
    let k = isometry_band(grid);
    (0..count as u64)
        .map(|i| CorpusMember {
            name: format!("bandlimited{i}"),
            generator: Generator::RandomBandlimited { k, seed: seed.wrapping_add(i) },
        })
        .collect()
}
