//! Deterministic CSV/JSON/SVG artifact writers.  Floats are printed with
//! 17 significant digits so identical runs produce byte-identical files.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::approx_eigen::AsymptoticsRow;
use crate::cesaro::CesaroVerifyReport;
use crate::error::Result;
use crate::operator::NormReport;
use crate::spectra::SpectralReport;
use crate::symbol::SymbolCurve;

/// 17 significant digits, scientific notation.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, text)?;
    Ok(())
}

pub fn curve_csv(curve: &SymbolCurve) -> String {
    let mut out = String::from("xi,re,im,err\n");
    for i in 0..curve.xi.len() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            format_float(curve.xi[i]),
            format_float(curve.values[i].re),
            format_float(curve.values[i].im),
            format_float(curve.err[i]),
        ));
    }
    out
}

pub fn samples_csv(x: &[f64], values: &[Complex64]) -> String {
    let mut out = String::from("x,re,im\n");
    for (xi, v) in x.iter().zip(values.iter()) {
        out.push_str(&format!(
            "{},{},{}\n",
            format_float(*xi),
            format_float(v.re),
            format_float(v.im)
        ));
    }
    out
}

/// Rows of the residual table CSV: "epsilon,xi,residual,norm".
pub struct ResidualRow {
    pub epsilon: f64,
    pub xi: f64,
    pub residual: f64,
    pub norm: f64,
}

pub fn residual_csv(rows: &[ResidualRow]) -> String {
    let mut out = String::from("epsilon,xi,residual,norm\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            format_float(r.epsilon),
            format_float(r.xi),
            format_float(r.residual),
            format_float(r.norm)
        ));
    }
    out
}

pub fn asymptotics_csv(rows: &[AsymptoticsRow]) -> String {
    let mut out = String::from("epsilon,norm,scaled\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            format_float(r.epsilon),
            format_float(r.norm),
            format_float(r.scaled)
        ));
    }
    out
}

pub fn norm_report_json(report: &NormReport) -> Value {
    json!({
        "value": report.value,
        "tail_bound": report.tail_bound,
        "quadrature_err": report.quadrature_err,
    })
}

pub fn spectral_report_json(report: &SpectralReport, curve_ref: &str) -> Value {
    let eigenvalues: Vec<[f64; 2]> = report.eigenvalues.iter().map(|v| [v.re, v.im]).collect();
    json!({
        "eigenvalues": eigenvalues,
        "curve_ref": curve_ref,
        "hausdorff_distance": report.hausdorff_distance,
        "sup_modulus": report.sup_modulus,
        "lower_norm_bound": report.lower_norm_bound,
        "upper_norm_bound": report.upper_norm_bound,
        "inclusion_only": report.inclusion_only,
        "tolerance": report.tolerance,
        "pass": report.pass,
    })
}

pub fn cesaro_report_json(report: &CesaroVerifyReport) -> Value {
    serde_json::to_value(report).expect("report serialization cannot fail")
}

pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    write_text(path, &format!("{}\n", serde_json::to_string_pretty(value).unwrap()))
}

/// Spectrum portrait: curve polyline plus eigenvalue dots on a square
/// viewport with annotated axes.  Eigenvalues are subsampled to at most
/// `MAX_DOTS` deterministically.
pub fn spectrum_svg(curve: &SymbolCurve, eigenvalues: &[Complex64]) -> String {
    const W: f64 = 800.0;
    const MAX_DOTS: usize = 2048;

    let mut pts: Vec<Complex64> = curve.values.clone();
    pts.extend_from_slice(eigenvalues);
    let (mut lo_re, mut hi_re, mut lo_im, mut hi_im) = (-1e-9f64, 1e-9f64, -1e-9f64, 1e-9f64);
    for p in &pts {
        lo_re = lo_re.min(p.re);
        hi_re = hi_re.max(p.re);
        lo_im = lo_im.min(p.im);
        hi_im = hi_im.max(p.im);
    }
    let span = ((hi_re - lo_re).max(hi_im - lo_im)) * 1.1;
    let cx = 0.5 * (lo_re + hi_re);
    let cy = 0.5 * (lo_im + hi_im);
    let to_px = |z: Complex64| -> (f64, f64) {
        (
            W * (0.5 + (z.re - cx) / span),
            W * (0.5 - (z.im - cy) / span),
        )
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{W}\" viewBox=\"0 0 {W} {W}\">\n"
    ));
    svg.push_str(&format!(
        "<rect width=\"{W}\" height=\"{W}\" fill=\"white\"/>\n"
    ));
    // axes through the origin when visible
    let (ox, oy) = to_px(Complex64::new(0.0, 0.0));
    if (0.0..=W).contains(&ox) {
        svg.push_str(&format!(
            "<line x1=\"{ox:.2}\" y1=\"0\" x2=\"{ox:.2}\" y2=\"{W}\" stroke=\"#cccccc\"/>\n"
        ));
    }
    if (0.0..=W).contains(&oy) {
        svg.push_str(&format!(
            "<line x1=\"0\" y1=\"{oy:.2}\" x2=\"{W}\" y2=\"{oy:.2}\" stroke=\"#cccccc\"/>\n"
        ));
    }
    svg.push_str(&format!(
        "<text x=\"8\" y=\"16\" font-size=\"12\" fill=\"#555555\">Re in [{:.4}, {:.4}], Im in [{:.4}, {:.4}]</text>\n",
        cx - span / 2.0, cx + span / 2.0, cy - span / 2.0, cy + span / 2.0
    ));

    svg.push_str("<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"");
    for v in &curve.values {
        let (x, y) = to_px(*v);
        svg.push_str(&format!("{x:.2},{y:.2} "));
    }
    svg.push_str("\"/>\n");

    let stride = (eigenvalues.len() / MAX_DOTS).max(1);
    for v in eigenvalues.iter().step_by(stride) {
        let (x, y) = to_px(*v);
        svg.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"1.5\" fill=\"#d62728\" fill-opacity=\"0.6\"/>\n"
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
