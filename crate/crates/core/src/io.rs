//! File formats: field JSON, sphere JSON, CSV tables and report helpers.
//!
//! Readers accept unsorted and duplicated entries and canonicalize; writers
//! emit canonical order with `-0` printed as `0`, so equal fields always
//! serialize to equal bytes.

use std::fmt::Display;

use num_complex::Complex;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::euclid::SolveReport;
use crate::scalar::Real;
use crate::spectral::{Mode, SpectralField};
use crate::sphere::{SphereField, SphereParams, SphereSolveReport};

/// Tool version written into every output header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Serializes any `Display` value as a JSON string (big integers, rationals).
pub fn ser_display<T: Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

fn to_f64<T: Real>(x: T) -> f64 {
    clean(x.to_f64().unwrap_or(f64::NAN))
}

fn from_f64<T: Real>(x: f64) -> Result<T> {
    T::from_f64(x).ok_or_else(|| Error::Parse(format!("{x} is not representable")))
}

fn amp_pair<T: Real>(a: Complex<T>) -> [f64; 2] {
    [to_f64(a.re), to_f64(a.im)]
}

#[derive(Serialize, Deserialize)]
struct ModeJson {
    xi: Vec<f64>,
    amp: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct FieldJson {
    dim: usize,
    modes: Vec<ModeJson>,
}

/// Parses `{"dim": n, "modes": [{"xi": [...], "amp": [re, im]}]}`.
pub fn field_from_json<T: Real>(text: &str) -> Result<SpectralField<T>> {
    let raw: FieldJson = serde_json::from_str(text)?;
    let modes = raw
        .modes
        .into_iter()
        .map(|m| {
            let xi = m.xi.into_iter().map(from_f64).collect::<Result<Vec<T>>>()?;
            Mode::new(xi, Complex::new(from_f64(m.amp[0])?, from_f64(m.amp[1])?))
        })
        .collect::<Result<Vec<_>>>()?;
    SpectralField::new(raw.dim, modes)
}

pub fn field_to_value<T: Real>(field: &SpectralField<T>) -> Value {
    let modes: Vec<Value> = field
        .modes()
        .iter()
        .map(|m| {
            let xi: Vec<f64> = m.freq.as_slice().iter().map(|&x| to_f64(x)).collect();
            json!({ "xi": xi, "amp": amp_pair(m.amp) })
        })
        .collect();
    json!({ "dim": field.dim(), "modes": modes })
}

pub fn field_to_json<T: Real>(field: &SpectralField<T>) -> String {
    pretty(&field_to_value(field))
}

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    l: u64,
    m: u64,
    amp: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct SphereJson {
    n: u32,
    coeffs: Vec<CoeffJson>,
}

/// Parses `{"n": n, "coeffs": [{"l": l, "m": m, "amp": [re, im]}]}`.
pub fn sphere_from_json<T: Real>(text: &str) -> Result<SphereField<T>> {
    let raw: SphereJson = serde_json::from_str(text)?;
    let params = SphereParams::new(raw.n)?;
    let entries = raw
        .coeffs
        .into_iter()
        .map(|c| Ok(((c.l, c.m), Complex::new(from_f64(c.amp[0])?, from_f64(c.amp[1])?))))
        .collect::<Result<Vec<_>>>()?;
    SphereField::new(params, entries)
}

pub fn sphere_to_value<T: Real>(field: &SphereField<T>) -> Value {
    let coeffs: Vec<Value> = field
        .coeffs()
        .iter()
        .map(|(&(l, m), &a)| json!({ "l": l, "m": m, "amp": amp_pair(a) }))
        .collect();
    json!({ "n": field.params().n(), "coeffs": coeffs })
}

pub fn sphere_to_json<T: Real>(field: &SphereField<T>) -> String {
    pretty(&sphere_to_value(field))
}

/// JSON mirror of a [`SolveReport`].
pub fn solve_report_value<T: Real>(r: &SolveReport<T>) -> Value {
    let kernel: Vec<Vec<f64>> =
        r.kernel_modes.iter().map(|f| f.as_slice().iter().map(|&x| to_f64(x)).collect()).collect();
    json!({
        "status": r.status,
        "residual": to_f64(r.residual),
        "conditioning": to_f64(r.conditioning),
        "kernel_modes": kernel,
        "note": r.note,
        "solution": r.solution.as_ref().map(field_to_value),
    })
}

/// JSON mirror of a [`SphereSolveReport`].
pub fn sphere_report_value<T: Real>(r: &SphereSolveReport<T>) -> Value {
    json!({
        "status": r.status,
        "residual": to_f64(r.residual),
        "conditioning": to_f64(r.conditioning),
        "kernel": r.kernel,
        "kernel_degrees": r.kernel_degrees,
        "note": r.note,
        "solution": r.solution.as_ref().map(sphere_to_value),
    })
}

/// `{"meta": {...}, "result": value}`.
pub fn with_meta(verb: &str, seed: u64, result: Value) -> Value {
    json!({ "meta": { "tool": "wavesnap", "version": VERSION, "verb": verb, "seed": seed }, "result": result })
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Comma-separated table preceded by a `#` header naming verb, seed and version.
pub fn csv_table(verb: &str, seed: u64, columns: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(columns).map_err(csv_error)?;
    for row in rows {
        if row.len() != columns.len() {
            return Err(Error::Precondition(format!("row has {} cells, expected {}", row.len(), columns.len())));
        }
        w.write_record(row).map_err(csv_error)?;
    }
    let body = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    let mut out = format!("# wavesnap {VERSION} verb={verb} seed={seed}\n");
    out.push_str(&String::from_utf8(body).expect("CSV of UTF-8 cells"));
    Ok(out)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Shortest round-trip decimal, with `-0` as `0`.
pub fn fmt_f64(x: f64) -> String {
    format!("{}", clean(x))
}
