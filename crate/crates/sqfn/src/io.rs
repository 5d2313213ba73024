//! Field files: a raw little-endian binary format and a CSV listing.
//!
//! Binary layout: magic `SQFN`, version u32 = 1, n u32, N u32, L f64, then
//! N^n f64 samples in lexicographic order (axis 0 slowest). All integers
//! and floats little-endian.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use sqfn_core::{GridSpec, ScalarField};

use crate::error::{Result, SqfnError};

pub const MAGIC: &[u8; 4] = b"SQFN";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 4 + 4 + 8;

/// Field file encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldFormat {
    Binary,
    Csv,
}

impl FieldFormat {
    /// `.csv` selects CSV; anything else is binary.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => FieldFormat::Csv,
            _ => FieldFormat::Binary,
        }
    }
}

pub fn encode_binary(f: &ScalarField) -> Vec<u8> {
    let g = f.grid();
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * g.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(g.dim() as u32).to_le_bytes());
    out.extend_from_slice(&(g.size() as u32).to_le_bytes());
    out.extend_from_slice(&g.length().to_le_bytes());
    for v in f.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_binary(bytes: &[u8]) -> Result<ScalarField> {
    if bytes.len() < HEADER_LEN {
        return Err(SqfnError::Format("truncated header".into()));
    }
    if &bytes[..4] != MAGIC {
        return Err(SqfnError::Format("bad magic".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let version = u32_at(4);
    if version != VERSION {
        return Err(SqfnError::Format(format!("unsupported version {version}")));
    }
    let n = u32_at(8) as usize;
    let size = u32_at(12) as usize;
    let length = f64::from_le_bytes(bytes[16..24].try_into().unwrap());
    let grid = GridSpec::new(n, size, length)?;
    let body = &bytes[HEADER_LEN..];
    if body.len() != 8 * grid.len() {
        return Err(SqfnError::Format(format!(
            "expected {} samples, found {} bytes",
            grid.len(),
            body.len()
        )));
    }
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(ScalarField::new(grid, values)?)
}

/// One row per sample: the index tuple, then the value.
pub fn encode_csv(f: &ScalarField) -> Result<Vec<u8>> {
    let g = f.grid();
    let n = g.dim();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = (0..n).map(|a| format!("i{a}")).collect();
    header.push("value".into());
    w.write_record(&header)?;
    for (i, v) in f.values().iter().enumerate() {
        let k = g.unravel(i);
        let mut row: Vec<String> = k[..n].iter().map(|x| x.to_string()).collect();
        // Shortest round-trip representation.
        row.push(format!("{v:?}"));
        w.write_record(&row)?;
    }
    w.into_inner().map_err(|e| SqfnError::Format(e.to_string()))
}

/// CSV files carry no box length, so it is supplied by the caller.
pub fn decode_csv(text: &[u8], length: f64) -> Result<ScalarField> {
    let mut r = csv::Reader::from_reader(text);
    let n = r.headers()?.len().checked_sub(1).filter(|n| (1..=3).contains(n));
    let n = n.ok_or_else(|| SqfnError::Format("expected 2 to 4 columns".into()))?;
    let mut rows: Vec<([usize; 3], f64)> = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let mut k = [0usize; 3];
        for a in 0..n {
            k[a] = rec[a]
                .trim()
                .parse()
                .map_err(|_| SqfnError::Format(format!("bad index {:?}", &rec[a])))?;
        }
        let v: f64 = rec[n]
            .trim()
            .parse()
            .map_err(|_| SqfnError::Format(format!("bad value {:?}", &rec[n])))?;
        rows.push((k, v));
    }
    let size = (rows.len() as f64).powf(1.0 / n as f64).round() as usize;
    let grid = GridSpec::new(n, size, length)?;
    if rows.len() != grid.len() {
        return Err(SqfnError::Format(format!("{} rows do not fill an {n}-D grid", rows.len())));
    }
    let mut values = vec![f64::NAN; grid.len()];
    for (k, v) in rows {
        if k[..n].iter().any(|&x| x >= size) {
            return Err(SqfnError::Format("index out of range".into()));
        }
        values[grid.ravel(&k[..n])] = v;
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(SqfnError::Format("missing or duplicate samples".into()));
    }
    Ok(ScalarField::new(grid, values)?)
}

pub fn write_field(path: &Path, f: &ScalarField) -> Result<()> {
    let bytes = match FieldFormat::from_path(path) {
        FieldFormat::Binary => encode_binary(f),
        FieldFormat::Csv => encode_csv(f)?,
    };
    let mut file = fs::File::create(path).map_err(SqfnError::io(path))?;
    file.write_all(&bytes).map_err(SqfnError::io(path))
}

/// Reads a field; `length` is required for CSV and ignored for binary.
pub fn read_field(path: &Path, length: Option<f64>) -> Result<ScalarField> {
    let mut bytes = Vec::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(SqfnError::io(path))?;
    match FieldFormat::from_path(path) {
        FieldFormat::Binary => decode_binary(&bytes),
        FieldFormat::Csv => {
            let l = length.ok_or_else(|| SqfnError::Usage("reading a CSV field requires --box".into()))?;
            decode_csv(&bytes, l)
        }
    }
}
