//! Compactly supported solutions of `∂̄v = f` and Hartogs extension.

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use super::assembly::{dbar_of_k, koppelman_k, Carrier, ChartForm, KernelAssembly};
use super::moment::{moment_check, MomentReport};
use crate::cutoff::{norm, BumpProfile};
use crate::error::{invalid, Result};
use crate::geometry::MonomialCurve;
use crate::kernels::WeightForm;
use crate::laurent::LaurentPoly;
use crate::poly::Poly;
use crate::quad::{integrate, QuadDomain};
use crate::{Cpx, DEFAULT_FD_STEP, TWO_PI_I};

/// One obstruction integral `∫_X f ∧ ζ₁^i ζ₂^j ω`.
#[derive(Clone, Debug, Serialize)]
pub struct Obstruction {
    /// Exponents `(i, j)` of `ζ₁^i ζ₂^j`.
    pub monomial: (u32, u32),
    pub value: Cpx,
}

/// A value of the solution at a chart point.
#[derive(Clone, Debug, Serialize)]
pub struct PointValue {
    pub z: Vec<Cpx>,
    pub value: Cpx,
}

/// Outcome of [`compact_support_solve`].
#[derive(Clone, Debug, Serialize)]
pub struct CompactReport {
    pub obstruction: Vec<Obstruction>,
    /// The obstruction vanishes for degree reasons.
    pub structural_zero: bool,
    pub solvable: bool,
    pub values: Vec<PointValue>,
    /// Largest `|∂̄v − f|` over the grid, when requested.
    pub dbar_residual: Option<f64>,
    /// Largest `|v|` at the probe points outside the support of `f`.
    pub support_leak: f64,
    /// Obstruction integrals re-evaluated on the solution as
    /// `lim ∮_{|τ|=ε} v·ζ₁^iζ₂^j ω`.
    pub necessity: Vec<Obstruction>,
    pub runtime_s: f64,
}

/// Options for [`compact_support_solve`].
#[derive(Clone, Debug)]
pub struct CompactOptions {
    /// Obstruction integrals below this are treated as zero.
    pub obstruction_tol: f64,
    /// Check `∂̄v = f` on the grid by central differences.
    pub check_dbar: bool,
    /// Points where `v` must vanish.
    pub outside: Vec<Vec<Cpx>>,
    /// Radius of the small circle used by the necessity check on curves.
    pub necessity_radius: f64,
}

impl Default for CompactOptions {
    fn default() -> Self {
        CompactOptions {
            obstruction_tol: 1e-6,
            check_dbar: false,
            outside: Vec::new(),
            necessity_radius: 0.1,
        }
    }
}

/// Monomials `ζ₁^i ζ₂^j` with `s·i + r·j ≤ 2c`.
fn obstruction_family(curve: &MonomialCurve) -> Vec<(u32, u32)> {
    let (r, s, c) = (curve.r(), curve.s(), curve.conductor());
    let mut out = Vec::new();
    for i in 0..=2 * c / s {
        for j in 0..=2 * c / r {
            if s * i + r * j <= 2 * c {
                out.push((i, j));
            }
        }
    }
    out
}

fn monomial_on_curve(curve: &MonomialCurve, (i, j): (u32, u32), tau: Cpx) -> Cpx {
    let p = curve.point(tau);
    p[0].powu(i) * p[1].powu(j)
}

/// Solves `∂̄v = f` with `v` compactly supported, for a ∂̄-closed `(0,1)`-form
/// `f` with compact support, using the Bochner–Martinelli kernel with trivial
/// weight.
///
/// On ℂ² the obstruction vanishes for degree reasons. On a monomial curve the
/// obstruction is the family `∫_X f ∧ ζ₁^iζ₂^j ω`, `s·i + r·j ≤ 2c`; when it
/// vanishes the solution is computed and the obstruction is re-evaluated on
/// it through small circles around the singular point.
pub fn compact_support_solve(
    assembly: &KernelAssembly,
    f: &ChartForm,
    grid: &[Vec<Cpx>],
    options: &CompactOptions,
) -> Result<CompactReport> {
    let start = Instant::now();
    if f.degree != 1 {
        return Err(invalid("compact-support solves take (0,1)-forms"));
    }
    let support = f
        .support_radius
        .ok_or_else(|| invalid("the right-hand side must have compact support"))?;
    let k1 = KernelAssembly {
        weight: WeightForm::trivial(assembly.dim_ambient),
        ..assembly.clone()
    };
    let (obstruction, structural_zero) = match assembly.carrier {
        Carrier::Ambient { .. } => (Vec::new(), true),
        Carrier::Curve(curve) => (curve_obstruction(&curve, f, support)?, false),
    };
    let solvable = obstruction
        .iter()
        .all(|o| o.value.norm() < options.obstruction_tol);
    let mut report = CompactReport {
        obstruction,
        structural_zero,
        solvable,
        values: Vec::new(),
        dbar_residual: None,
        support_leak: 0.0,
        necessity: Vec::new(),
        runtime_s: 0.0,
    };
    if !solvable {
        report.runtime_s = start.elapsed().as_secs_f64();
        return Ok(report);
    }
    let mut dbar_residual: f64 = 0.0;
    for z in grid {
        let value = koppelman_k(&k1, f, z, None)?;
        if options.check_dbar {
            let d = dbar_of_k(&k1, f, z, DEFAULT_FD_STEP)?;
            for (a, b) in d.iter().zip(f.eval(z)) {
                dbar_residual = dbar_residual.max((a - b).norm());
            }
        }
        report.values.push(PointValue {
            z: z.clone(),
            value,
        });
    }
    if options.check_dbar {
        report.dbar_residual = Some(dbar_residual);
    }
    for z in &options.outside {
        report.support_leak = report
            .support_leak
            .max(koppelman_k(&k1, f, z, None)?.norm());
    }
    if let Carrier::Curve(curve) = assembly.carrier {
        let eps = options.necessity_radius;
        if f.vanishing_radius <= eps {
            return Err(invalid(
                "the necessity circle must lie where the right-hand side vanishes",
            ));
        }
        let n = 48;
        let mut samples = Vec::with_capacity(n);
        for k in 0..n {
            let tau = Cpx::from_polar(eps, std::f64::consts::TAU * (k as f64 + 0.5) / n as f64);
            samples.push((tau, koppelman_k(&k1, f, &[tau], None)?));
        }
        let density = |tau: Cpx| TWO_PI_I * tau.powi(-(curve.conductor() as i32));
        for &m in &obstruction_family(&curve) {
            let mut acc = Cpx::default();
            for &(tau, v) in &samples {
                // dτ = iτ dθ
                acc += v * monomial_on_curve(&curve, m, tau) * density(tau) * Cpx::i() * tau;
            }
            let value = acc * (std::f64::consts::TAU / n as f64);
            report.necessity.push(Obstruction { monomial: m, value });
        }
    }
    report.runtime_s = start.elapsed().as_secs_f64();
    Ok(report)
}

fn curve_obstruction(
    curve: &MonomialCurve,
    f: &ChartForm,
    support: f64,
) -> Result<Vec<Obstruction>> {
    let c = curve.conductor() as i32;
    let mut domain = QuadDomain::disc(Cpx::default(), support);
    for &r in &f.breaks {
        if r > 0.0 && r < support {
            domain = domain.with_break(vec![Cpx::default()], r);
        }
    }
    if f.vanishing_radius > 0.0 && f.vanishing_radius < support {
        domain = domain.with_break(vec![Cpx::default()], f.vanishing_radius);
    }
    let mut out = Vec::new();
    for m in obstruction_family(curve) {
        // f dτ̄ ∧ h 2πi τ^{−c} dτ = 2i·2πi·f h τ^{−c} dA
        let r = integrate(
            &domain,
            |w| {
                let t = w[0];
                let v = f.eval(w)[0];
                if v == Cpx::default() {
                    return Ok(v);
                }
                Ok(v * monomial_on_curve(curve, m, t) * t.powi(-c) * TWO_PI_I * Cpx::new(0.0, 2.0))
            },
            1e-10,
        )?;
        out.push(Obstruction {
            monomial: m,
            value: r.value,
        });
    }
    Ok(out)
}

/// Holomorphic data on an open set of ℂ².
pub type AmbientFn = Arc<dyn Fn(&[Cpx]) -> Cpx + Send + Sync>;

/// A Hartogs extension problem: `φ` holomorphic outside a compact set where
/// the cutoff equals one.
#[derive(Clone)]
pub enum HartogsCase {
    /// `φ` holomorphic on a neighborhood of `{χ < 1}` in ℂ².
    Ball { phi: AmbientFn, cutoff: BumpProfile },
    /// `φ(τ)` on the punctured normalization of a monomial curve, with a
    /// cutoff in `|ζ|`.
    Cusp {
        curve: MonomialCurve,
        phi: LaurentPoly,
        cutoff: BumpProfile,
    },
}

impl std::fmt::Debug for HartogsCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HartogsCase::Ball { cutoff, .. } => write!(f, "HartogsCase::Ball({cutoff:?})"),
            HartogsCase::Cusp { curve, phi, .. } => {
                write!(f, "HartogsCase::Cusp({}, {}, {phi})", curve.r(), curve.s())
            }
        }
    }
}

/// Outcome of [`hartogs_extend`].
#[derive(Clone, Debug, Serialize)]
pub struct HartogsReport {
    pub extends: bool,
    /// `Φ = (1 − χ)φ + u` at the requested points, when `φ` extends.
    pub values: Vec<PointValue>,
    /// Moment residues (curves only).
    pub moments: Option<MomentReport>,
    /// A polynomial representative of the extension (curves only).
    pub representative: Option<Poly>,
    /// The underlying compact-support solve.
    pub solve: CompactReport,
}

/// Extends `φ` across the compact set by solving `∂̄u = ∂̄χ·φ` with compact
/// support and setting `Φ = (1 − χ)φ + u`.
pub fn hartogs_extend(
    case: &HartogsCase,
    points: &[Vec<Cpx>],
    options: &CompactOptions,
) -> Result<HartogsReport> {
    match case {
        HartogsCase::Ball { phi, cutoff } => {
            let chi = *cutoff;
            let p = phi.clone();
            let f = ChartForm::new(2, 1, move |w| {
                if !chi.in_transition(norm(w)) {
                    return vec![Cpx::default(); 2];
                }
                let v = p(w);
                chi.dbar_at(w, &[Cpx::default(); 2])
                    .into_iter()
                    .map(|d| d * v)
                    .collect()
            })?
            .with_bump_support(&chi)
            .vanishing_within(chi.inner);
            let assembly = KernelAssembly::ball(WeightForm::trivial(2))?;
            let solve = compact_support_solve(&assembly, &f, points, options)?;
            let values = solve
                .values
                .iter()
                .map(|pv| {
                    let x = chi.value(norm(&pv.z));
                    let outer = if x < 1.0 {
                        phi(&pv.z) * (1.0 - x)
                    } else {
                        Cpx::default()
                    };
                    PointValue {
                        z: pv.z.clone(),
                        value: outer + pv.value,
                    }
                })
                .collect();
            Ok(HartogsReport {
                extends: solve.solvable,
                values,
                moments: None,
                representative: None,
                solve,
            })
        }
        HartogsCase::Cusp { curve, phi, cutoff } => {
            let moments = moment_check(curve, phi, None)?;
            let chi = *cutoff;
            let (c, p) = (*curve, phi.clone());
            let f = ChartForm::new(1, 1, move |w| {
                let zeta = c.point(w[0]);
                let rho = norm(&zeta);
                if !chi.in_transition(rho) {
                    return vec![Cpx::default()];
                }
                let d = chi.dbar_at(&zeta, &[Cpx::default(); 2]);
                let t = c.tangent(w[0]);
                vec![(d[0] * t[0].conj() + d[1] * t[1].conj()) * p.eval(w[0])]
            })?
            .with_bump_support(&chi)
            .vanishing_within(chi.inner)
            .ambient_radii_to_chart(curve);
            let assembly = KernelAssembly::cusp(*curve, WeightForm::trivial(2))?;
            let solve = compact_support_solve(&assembly, &f, points, options)?;
            let values = solve
                .values
                .iter()
                .map(|pv| {
                    let x = chi.value(norm(&curve.point(pv.z[0])));
                    PointValue {
                        z: pv.z.clone(),
                        value: phi.eval(pv.z[0]) * (1.0 - x) + pv.value,
                    }
                })
                .collect();
            Ok(HartogsReport {
                extends: solve.solvable,
                values,
                representative: moments.representative.clone(),
                moments: Some(moments),
                solve,
            })
        }
    }
}
