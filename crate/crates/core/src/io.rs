//! Text formats for polynomials and sample vectors.
//!
//! JSON: `{"d0": <real>, "terms": [{"k": <freq>, "d": <amp>, "phi": <phase>}, ...]}`
//! with terms ascending in `k`, written compactly with a trailing newline.
//!
//! CSV: header `k,d,phi`, one term per row, the constant term carried as a
//! `k = 0` row. Sample vectors use a single `value` column. All floats are
//! written with Rust's shortest round-trip formatting, so rereading a file
//! reproduces the exact values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{SampledFunction, TrigPolynomial, TrigTerm};

#[derive(Serialize, Deserialize)]
struct PolyFile {
    d0: f64,
    terms: Vec<TrigTerm>,
}

fn parse_err(context: &str, detail: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{context}: {detail}"))
}

/// Compact JSON with ascending terms and a trailing newline.
pub fn poly_to_json(t: &TrigPolynomial) -> String {
    let file = PolyFile { d0: t.d0(), terms: t.terms().copied().collect() };
    let mut s = serde_json::to_string(&file).expect("plain data serializes");
    s.push('\n');
    s
}

/// Parses [`poly_to_json`]'s format, canonicalizing amplitudes and phases.
pub fn poly_from_json(s: &str) -> Result<TrigPolynomial> {
    let file: PolyFile =
        serde_json::from_str(s).map_err(|e| parse_err("polynomial JSON", e))?;
    if !file.d0.is_finite() {
        return Err(parse_err("polynomial JSON", "constant term is not finite"));
    }
    TrigPolynomial::from_terms(
        file.d0,
        file.terms.iter().map(|t| TrigTerm::new(t.k, t.d, t.phi)),
    )
}

/// CSV with header `k,d,phi`; the constant term is the `k = 0` row.
pub fn poly_to_csv(t: &TrigPolynomial) -> String {
    let mut out = String::from("k,d,phi\n");
    out.push_str(&format!("0,{},0\n", t.d0()));
    for term in t.terms() {
        out.push_str(&format!("{},{},{}\n", term.k, term.d, term.phi));
    }
    out
}

/// Parses [`poly_to_csv`]'s format.
pub fn poly_from_csv(s: &str) -> Result<TrigPolynomial> {
    let mut lines = s.lines().map(|l| l.trim_end_matches('\r'));
    match lines.next().map(str::trim) {
        Some("k,d,phi") => {}
        other => {
            return Err(parse_err(
                "polynomial CSV",
                format!("expected header `k,d,phi`, found {other:?}"),
            ))
        }
    }
    let mut d0: Option<f64> = None;
    let mut terms = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = i + 2;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(parse_err(
                "polynomial CSV",
                format!("row {row}: expected 3 fields, found {}", fields.len()),
            ));
        }
        let k: u32 = fields[0]
            .trim()
            .parse()
            .map_err(|e| parse_err("polynomial CSV", format!("row {row} frequency: {e}")))?;
        let d: f64 = fields[1]
            .trim()
            .parse()
            .map_err(|e| parse_err("polynomial CSV", format!("row {row} amplitude: {e}")))?;
        let phi: f64 = fields[2]
            .trim()
            .parse()
            .map_err(|e| parse_err("polynomial CSV", format!("row {row} phase: {e}")))?;
        if k == 0 {
            if d0.is_some() {
                return Err(parse_err("polynomial CSV", "duplicate constant row"));
            }
            if !d.is_finite() {
                return Err(parse_err("polynomial CSV", "constant term is not finite"));
            }
            d0 = Some(d);
        } else {
            terms.push(TrigTerm::new(k, d, phi));
        }
    }
    TrigPolynomial::from_terms(d0.unwrap_or(0.0), terms)
}

/// Single-column CSV with header `value`.
pub fn samples_to_csv(f: &SampledFunction) -> String {
    let mut out = String::from("value\n");
    for v in f.values() {
        out.push_str(&format!("{v}\n"));
    }
    out
}

/// Parses [`samples_to_csv`]'s format.
pub fn samples_from_csv(s: &str) -> Result<SampledFunction> {
    let mut lines = s.lines().map(|l| l.trim_end_matches('\r'));
    match lines.next().map(str::trim) {
        Some("value") => {}
        other => {
            return Err(parse_err(
                "samples CSV",
                format!("expected header `value`, found {other:?}"),
            ))
        }
    }
    let mut values = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: f64 = line
            .trim()
            .parse()
            .map_err(|e| parse_err("samples CSV", format!("row {}: {e}", i + 2)))?;
        values.push(v);
    }
    SampledFunction::new(values)
}
