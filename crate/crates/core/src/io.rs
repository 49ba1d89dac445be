//! Plain-text exchange formats: small CSV tables plus JSON sidecars.
//!
//! Every float is written with `{:.17e}` so a write/read round trip is
//! bit-exact and two runs with the same seed produce byte-identical files.

use crate::divergence::{ErrorProfile, NormCurve};
use crate::error::{Error, Result};
use crate::phase::{AmplitudeSamples, MeasurementDesign};
use crate::sampling::SamplingSet;
use crate::signal::{Quadrature, Spectrum};
use crate::C64;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

fn parse_field<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse { line, detail: format!("bad field {s:?}") })
}

fn split_row<'a>(row: &'a str, want: usize, line: usize) -> Result<Vec<&'a str>> {
    let fields: Vec<&str> = row.split(',').collect();
    if fields.len() != want {
        return Err(Error::Parse { line, detail: format!("expected {} fields, got {}", want, fields.len()) });
    }
    Ok(fields)
}

/// `omega,re,im` rows over the frequency grid.
pub fn spectrum_to_csv(f: &Spectrum) -> String {
    let mut out = String::from("omega,re,im\n");
    for (w, v) in f.grid().iter().zip(f.values()) {
        let _ = writeln!(out, "{:.17e},{:.17e},{:.17e}", w, v.re, v.im);
    }
    out
}

pub fn spectrum_from_csv(text: &str, band_edge: f64, quadrature: Quadrature) -> Result<Spectrum> {
    let mut grid = Vec::new();
    let mut values = Vec::new();
    for (i, row) in text.lines().enumerate() {
        if i == 0 {
            continue;
        }
        let f = split_row(row, 3, i + 1)?;
        grid.push(parse_field(f[0], i + 1)?);
        values.push(C64::new(parse_field(f[1], i + 1)?, parse_field(f[2], i + 1)?));
    }
    Spectrum::new(band_edge, grid, values, quadrature)
}

/// Metadata written next to a spectrum CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumSidecar {
    pub band_edge: f64,
    pub quadrature: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl SpectrumSidecar {
    pub fn for_spectrum(f: &Spectrum, family: Option<String>, seed: Option<u64>) -> Self {
        let quadrature = match f.quadrature() {
            Quadrature::Trapezoid => "trapezoid",
            Quadrature::Simpson => "simpson",
        }
        .to_string();
        SpectrumSidecar { band_edge: f.band_edge(), quadrature, family, seed }
    }

    pub fn quadrature_enum(&self) -> Result<Quadrature> {
        match self.quadrature.as_str() {
            "trapezoid" => Ok(Quadrature::Trapezoid),
            "simpson" => Ok(Quadrature::Simpson),
            other => Err(Error::Config(format!("unknown quadrature {other:?}"))),
        }
    }
}

/// `n,lambda_re,lambda_im` rows with signed index n. The points are real;
/// the imaginary column is kept for forward compatibility and written as 0.
pub fn sampling_set_to_csv(s: &SamplingSet) -> String {
    let mut out = String::from("n,lambda_re,lambda_im\n");
    let n_max = s.n_max() as i64;
    for (i, p) in s.points().iter().enumerate() {
        let _ = writeln!(out, "{},{:.17e},{:.17e}", i as i64 - n_max, p, 0.0);
    }
    out
}

pub fn sampling_points_from_csv(text: &str) -> Result<Vec<f64>> {
    let mut points = Vec::new();
    for (i, row) in text.lines().enumerate() {
        if i == 0 {
            continue;
        }
        let f = split_row(row, 3, i + 1)?;
        points.push(parse_field::<f64>(f[1], i + 1)?);
    }
    Ok(points)
}

/// `n,m,c` rows: block index, frame index, squared magnitude.
pub fn amplitudes_to_csv(a: &AmplitudeSamples) -> String {
    let mut out = String::from("n,m,c\n");
    for (i, row) in a.c.iter().enumerate() {
        for (m, &c) in row.iter().enumerate() {
            let _ = writeln!(out, "{},{},{:.17e}", a.n_lo + i as i64, m, c);
        }
    }
    out
}

pub fn amplitudes_from_csv(text: &str) -> Result<AmplitudeSamples> {
    let mut rows: Vec<(i64, usize, f64)> = Vec::new();
    for (i, row) in text.lines().enumerate() {
        if i == 0 {
            continue;
        }
        let f = split_row(row, 3, i + 1)?;
        rows.push((parse_field(f[0], i + 1)?, parse_field(f[1], i + 1)?, parse_field(f[2], i + 1)?));
    }
    if rows.is_empty() {
        return Err(Error::Parse { line: 1, detail: "no measurement rows".into() });
    }
    let n_lo = rows.iter().map(|r| r.0).min().unwrap();
    let n_hi = rows.iter().map(|r| r.0).max().unwrap();
    let width = rows.iter().map(|r| r.1).max().unwrap() + 1;
    let mut c = vec![vec![f64::NAN; width]; (n_hi - n_lo + 1) as usize];
    for (n, m, val) in rows {
        c[(n - n_lo) as usize][m] = val;
    }
    if c.iter().flatten().any(|x| x.is_nan()) {
        return Err(Error::Parse { line: 0, detail: "missing (n, m) entries".into() });
    }
    Ok(AmplitudeSamples { n_lo, c })
}

/// JSON form of a measurement design (frame stored as re/im pairs).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DesignJson {
    pub k: usize,
    pub beta: f64,
    pub shifts: Vec<f64>,
    pub frame_re: Vec<Vec<f64>>,
    pub frame_im: Vec<Vec<f64>>,
    pub anchor_threshold: f64,
}

pub fn design_to_json(d: &MeasurementDesign) -> DesignJson {
    DesignJson {
        k: d.k(),
        beta: d.beta(),
        shifts: d.shifts().to_vec(),
        frame_re: d.frame().iter().map(|v| v.iter().map(|z| z.re).collect()).collect(),
        frame_im: d.frame().iter().map(|v| v.iter().map(|z| z.im).collect()).collect(),
        anchor_threshold: d.anchor_threshold(),
    }
}

pub fn design_from_json(j: &DesignJson) -> Result<MeasurementDesign> {
    if j.frame_re.len() != j.frame_im.len() {
        return Err(Error::Config("frame_re/frame_im length mismatch".into()));
    }
    let frame = j
        .frame_re
        .iter()
        .zip(&j.frame_im)
        .map(|(re, im)| {
            if re.len() != im.len() {
                return Err(Error::Config("frame vector length mismatch".into()));
            }
            Ok(re.iter().zip(im).map(|(&r, &i)| C64::new(r, i)).collect())
        })
        .collect::<Result<Vec<Vec<C64>>>>()?;
    MeasurementDesign::from_parts(j.k, j.beta, j.shifts.clone(), frame, j.anchor_threshold)
}

/// `N,value` rows.
pub fn norm_curve_to_csv(c: &NormCurve) -> String {
    let mut out = String::from("N,value\n");
    for &(n, v) in &c.entries {
        let _ = writeln!(out, "{},{:.17e}", n, v);
    }
    out
}

/// `N,local_sup,global_sup,argmax_t` rows.
pub fn error_profiles_to_csv(profiles: &[ErrorProfile]) -> String {
    let mut out = String::from("N,local_sup,global_sup,argmax_t\n");
    for p in profiles {
        let _ = writeln!(out, "{},{:.17e},{:.17e},{:.17e}", p.n_trunc, p.local_sup, p.global_sup, p.argmax_t);
    }
    out
}
