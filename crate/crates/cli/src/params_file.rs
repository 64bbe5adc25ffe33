//! Flat key=value parameter files mirroring [`SchemeParams`].

use egk_core::schemes::{SchemeKind, SchemeParams};

use crate::{CliError, Result};

fn format_err(msg: impl Into<String>) -> CliError {
    CliError::Format(msg.into())
}

fn kind_from(s: &str) -> Option<SchemeKind> {
    match s.to_ascii_lowercase().as_str() {
        "bwe" | "1" => Some(SchemeKind::Bwe),
        "multi-nh" | "nh" | "2" => Some(SchemeKind::MultiNh),
        "multi-ur" | "ur" | "3" => Some(SchemeKind::MultiUr),
        _ => None,
    }
}

/// Parses a parameter file. Blank lines and `#` comments are ignored;
/// `kind`, `m`, the code shape and the four weights are required, the
/// rest default to 0, and `pk_bytes`/`ct_bytes` come as a pair.
pub fn parse_params(text: &str) -> Result<SchemeParams> {
    let mut p = SchemeParams {
        kind: SchemeKind::Bwe,
        row: 0,
        m: 0,
        n1: 0,
        k1: 0,
        n2: 0,
        k2: 0,
        t1: 0,
        t2: 0,
        z: 0,
        wx: 0,
        wy: 0,
        w1: 0,
        w2: 0,
        we: 0,
        r: 0,
        security: 0,
        published_sizes: None,
    };
    let mut seen: Vec<String> = Vec::new();
    let (mut pk, mut ct) = (None, None);
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format_err(format!("line {}: expected key=value", lineno + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if seen.iter().any(|s| s == k) {
            return Err(format_err(format!("line {}: duplicate key {k}", lineno + 1)));
        }
        seen.push(k.to_string());
        if k == "kind" {
            p.kind = kind_from(v).ok_or_else(|| format_err(format!("unknown scheme kind {v:?}")))?;
            continue;
        }
        let n: usize = v.parse().map_err(|_| format_err(format!("line {}: {k} expects an integer", lineno + 1)))?;
        match k {
            "row" => p.row = u8::try_from(n).map_err(|_| format_err("row must fit in a byte"))?,
            "m" => p.m = n,
            "n1" => p.n1 = n,
            "k1" => p.k1 = n,
            "n2" => p.n2 = n,
            "k2" => p.k2 = n,
            "t1" => p.t1 = n,
            "t2" => p.t2 = n,
            "z" => p.z = n,
            "wx" => p.wx = n,
            "wy" => p.wy = n,
            "w1" => p.w1 = n,
            "w2" => p.w2 = n,
            "we" => p.we = n,
            "r" => p.r = n,
            "security" => p.security = u32::try_from(n).map_err(|_| format_err("security out of range"))?,
            "pk_bytes" => pk = Some(n),
            "ct_bytes" => ct = Some(n),
            _ => return Err(format_err(format!("line {}: unknown key {k}", lineno + 1))),
        }
    }
    for key in ["kind", "m", "n1", "k1", "n2", "k2", "t1", "t2", "wx", "wy", "w1", "w2"] {
        if !seen.iter().any(|s| s == key) {
            return Err(format_err(format!("missing key {key}")));
        }
    }
    p.published_sizes = match (pk, ct) {
        (Some(a), Some(b)) => Some((a, b)),
        (None, None) => None,
        _ => return Err(format_err("pk_bytes and ct_bytes must be given together")),
    };
    Ok(p)
}

/// The file form of a parameter set; [`parse_params`] inverts it.
pub fn format_params(p: &SchemeParams) -> String {
    let mut out = format!("kind={}\nrow={}\n", p.kind.name(), p.row);
    for (k, v) in [
        ("m", p.m),
        ("n1", p.n1),
        ("k1", p.k1),
        ("n2", p.n2),
        ("k2", p.k2),
        ("t1", p.t1),
        ("t2", p.t2),
        ("z", p.z),
        ("wx", p.wx),
        ("wy", p.wy),
        ("w1", p.w1),
        ("w2", p.w2),
        ("we", p.we),
        ("r", p.r),
    ] {
        out.push_str(&format!("{k}={v}\n"));
    }
    out.push_str(&format!("security={}\n", p.security));
    if let Some((pk, ct)) = p.published_sizes {
        out.push_str(&format!("pk_bytes={pk}\nct_bytes={ct}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use egk_core::schemes::registry;

    #[test]
    fn registry_rows_round_trip() {
        for p in registry() {
            assert_eq!(parse_params(&format_params(&p)).unwrap(), p);
        }
    }

    #[test]
    fn malformed_files() {
        assert!(parse_params("kind=BWE\nm=53").is_err());
        assert!(parse_params("kind=xyz").is_err());
        let full = format_params(&registry()[0]);
        assert!(parse_params(&(full.clone() + "m=3\n")).is_err());
        assert!(parse_params(&(full.clone() + "bogus=1\n")).is_err());
        assert!(parse_params(&full.replace("ct_bytes=7818\n", "")).is_err());
        let commented = format!("# row one\n{}\n", full.replace("m=53", "m = 53  # degree"));
        assert_eq!(parse_params(&commented).unwrap(), registry()[0]);
    }
}
