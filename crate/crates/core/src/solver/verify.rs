//! Pointwise checks of `φ = ∂̄Kφ + K∂̄φ + Pφ`.

use std::time::Instant;

use serde::Serialize;

use super::assembly::{dbar_of_k, koppelman_k, projection_p, ChartForm, KernelAssembly};
use crate::error::Result;
use crate::{Cpx, DEFAULT_FD_STEP};

/// Both sides of the identity at one chart point.
#[derive(Clone, Debug, Serialize)]
pub struct GridPoint {
    pub z: Vec<Cpx>,
    /// `φ(z)`, one entry per coefficient.
    pub lhs: Vec<Cpx>,
    /// `∂̄Kφ + K∂̄φ + Pφ` at `z`.
    pub rhs: Vec<Cpx>,
    pub residual: f64,
}

/// Outcome of [`verify_koppelman`].
#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub points: Vec<GridPoint>,
    pub max_residual: f64,
    pub runtime_s: f64,
}

/// Evaluates the Koppelman identity on a grid of chart points.
///
/// For functions the right-hand side is `K∂̄φ + Pφ` (`∂̄φ` by central
/// differences inside the integrand). For `(0,1)`-forms it is `∂̄Kφ`, with
/// `∂̄` in `z` by central differences; on two-dimensional charts `φ` must be
/// ∂̄-closed, since `K∂̄φ` would be a form in `z` of positive degree.
pub fn verify_koppelman(
    assembly: &KernelAssembly,
    phi: &ChartForm,
    grid: &[Vec<Cpx>],
) -> Result<SolveReport> {
    let start = Instant::now();
    let dphi = if phi.degree == 0 {
        Some(phi.dbar()?)
    } else {
        None
    };
    let mut points = Vec::with_capacity(grid.len());
    for z in grid {
        let lhs = phi.eval(z);
        let rhs = match &dphi {
            Some(d) => vec![koppelman_k(assembly, d, z, None)? + projection_p(assembly, phi, z)?],
            None => dbar_of_k(assembly, phi, z, DEFAULT_FD_STEP)?,
        };
        let residual = lhs
            .iter()
            .zip(&rhs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        points.push(GridPoint {
            z: z.clone(),
            lhs,
            rhs,
            residual,
        });
    }
    let max_residual = points.iter().map(|p| p.residual).fold(0.0, f64::max);
    Ok(SolveReport {
        points,
        max_residual,
        runtime_s: start.elapsed().as_secs_f64(),
    })
}

/// `n × m` grid on the square `[−h, h]²` of the plane.
pub fn square_grid(half_width: f64, n: usize, m: usize) -> Vec<Vec<Cpx>> {
    let t = |i: usize, k: usize| {
        if k <= 1 {
            0.0
        } else {
            -half_width + 2.0 * half_width * i as f64 / (k - 1) as f64
        }
    };
    let mut out = Vec::with_capacity(n * m);
    for j in 0..m {
        for i in 0..n {
            out.push(vec![Cpx::new(t(i, n), t(j, m))]);
        }
    }
    out
}

/// Polar grid on the annulus `r_in ≤ |τ| ≤ r_out`, `nr` radii by `nt` angles.
pub fn annulus_grid(r_in: f64, r_out: f64, nr: usize, nt: usize) -> Vec<Vec<Cpx>> {
    let mut out = Vec::with_capacity(nr * nt);
    for i in 0..nr {
        let r = if nr <= 1 {
            r_in
        } else {
            r_in + (r_out - r_in) * i as f64 / (nr - 1) as f64
        };
        for k in 0..nt {
            // offset keeps points off the real axis
            let theta = std::f64::consts::TAU * (k as f64 + 0.3) / nt as f64;
            out.push(vec![Cpx::from_polar(r, theta)]);
        }
    }
    out
}
