//! Growth of `Kφ` near the singular point.

use serde::Serialize;

use super::assembly::{koppelman_k, ChartForm, KernelAssembly};
use crate::cutoff::norm;
use crate::error::{invalid, Result};
use crate::fit::loglog_slope;
use crate::Cpx;

/// Log-log slopes of `|Kφ(z_j)|` against `1/δ_j`, `δ_j = |z_j|`.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub deltas: Vec<f64>,
    pub values: Vec<Cpx>,
    /// Slope over the whole path.
    pub slope: f64,
    /// Slope over the second half of the path.
    pub tail_slope: f64,
    /// `|tail_slope − slope| ≤ stability_tol`.
    pub tail_stable: bool,
    pub stability_tol: f64,
}

/// Evaluates `Kφ` along a path of chart points approaching the singular
/// point (the origin of the ambient space) and fits the growth exponent.
pub fn asymptotic_probe(
    assembly: &KernelAssembly,
    phi: &ChartForm,
    path: &[Vec<Cpx>],
    stability_tol: f64,
) -> Result<ProbeReport> {
    if path.len() < 4 {
        return Err(invalid("the probe needs at least four points"));
    }
    let mut deltas = Vec::with_capacity(path.len());
    let mut values = Vec::with_capacity(path.len());
    for w in path {
        deltas.push(norm(&assembly.ambient_point(w)));
        values.push(koppelman_k(assembly, phi, w, None)?);
    }
    let inv: Vec<f64> = deltas.iter().map(|d| 1.0 / d).collect();
    let mags: Vec<f64> = values.iter().map(|v| v.norm()).collect();
    let slope = loglog_slope(&inv, &mags).ok_or_else(|| invalid("degenerate probe path"))?;
    let half = path.len() / 2;
    let tail_slope = loglog_slope(&inv[half..], &mags[half..])
        .ok_or_else(|| invalid("degenerate probe path"))?;
    Ok(ProbeReport {
        deltas,
        values,
        slope,
        tail_slope,
        tail_stable: (tail_slope - slope).abs() <= stability_tol,
        stability_tol,
    })
}
