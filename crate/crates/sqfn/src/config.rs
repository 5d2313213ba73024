//! Flat `key = value` configuration files.

use std::collections::BTreeMap;

use crate::error::{Result, SqfnError};

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
/// Keys use the long flag names without dashes.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| SqfnError::Usage(format!("config line {}: expected key = value", lineno + 1)))?;
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            return Err(SqfnError::Usage(format!("config line {}: empty key", lineno + 1)));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_normalizes() {
        let c = parse_config("# comment\n size = 128\n\nscales_per_octave=16 # trailing\n").unwrap();
        assert_eq!(c["size"], "128");
        assert_eq!(c["scales-per-octave"], "16");
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_config("size 128").is_err());
        assert!(parse_config(" = 3").is_err());
    }
}
