//! Exact and contour computations on the monomial curves.

use koppelman_core::geometry::{omega_blowup_exponent, LelongTarget, TestForm};
use koppelman_core::solver::{pairing_contour, pairing_cutoff, pairing_exact, PairingTest};
use koppelman_core::{
    classify_monomials, cusp_structure_form, lelong_pair, pullback_gamma_check, BumpProfile, Cpx,
    Extrapolation, LaurentPoly, MonomialCurve, Poly,
};
use serde_json::json;

use super::{c, in_semigroup, json, Outcome};
use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::report::Check;

pub(crate) fn curve(config: &ScenarioConfig) -> Result<MonomialCurve, CliError> {
    let (r, s) = (config.geometry.r, config.geometry.s);
    MonomialCurve::new(r, s).map_err(|e| CliError::Usage(format!("geometry.r, geometry.s: {e}")))
}

pub(crate) fn parse_phi(config: &ScenarioConfig, default: &str) -> Result<LaurentPoly, CliError> {
    let src = config.geometry.phi.as_deref().unwrap_or(default);
    src.parse()
        .map_err(|e| CliError::Usage(format!("geometry.phi `{src}`: {e}")))
}

pub(crate) fn cusp_classify(config: &ScenarioConfig) -> Result<Outcome, CliError> {
    let x = curve(config)?;
    let cond = x.conductor();
    let kmax = config.geometry.kmax.unwrap_or(2 * cond);
    if kmax < 2 * cond {
        return Err(CliError::Usage(format!(
            "geometry.kmax must be at least twice the conductor ({})",
            2 * cond
        )));
    }
    let table = classify_monomials(&x, kmax)?;
    let mismatches = table
        .iter()
        .filter(|m| m.extends != in_semigroup(x.r(), x.s(), i64::from(m.k)))
        .count();
    let missing = table.len().abs_diff(kmax as usize + 1);
    let non_extending: Vec<u32> = table.iter().filter(|m| !m.extends).map(|m| m.k).collect();
    Ok(Outcome {
        checks: vec![
            Check::count("disagreements with semigroup oracle", mismatches),
            Check::count("table size mismatch", missing),
        ],
        data: json!({
            "r": x.r(),
            "s": x.s(),
            "conductor": cond,
            "kmax": kmax,
            "non_extending": non_extending,
            "table": json(&table)?,
        }),
        plot: Vec::new(),
    })
}

pub(crate) fn moment_check(config: &ScenarioConfig) -> Result<Outcome, CliError> {
    let x = curve(config)?;
    let phi = parse_phi(config, "tau")?;
    let report = koppelman_core::moment_check(&x, &phi, None)?;
    let oracle = phi.terms().all(|(k, _)| in_semigroup(x.r(), x.s(), k));
    let obstructions: Vec<i64> = report.obstructions().map(|(m, _)| m).collect();
    Ok(Outcome {
        checks: vec![Check::count(
            "verdict differs from semigroup oracle",
            usize::from(report.extends != oracle),
        )],
        data: json!({
            "extends": report.extends,
            "obstructed_moments": obstructions,
            "report": json(&report)?,
        }),
        plot: Vec::new(),
    })
}

pub(crate) fn structure_form(config: &ScenarioConfig) -> Result<Outcome, CliError> {
    let x = curve(config)?;
    let radii = &config.geometry.radii;
    if radii.is_empty() {
        return Err(CliError::Usage("geometry.radii must not be empty".into()));
    }
    let tol = 1e-8;
    let mut checks = Vec::new();
    let mut samples = Vec::new();
    for &radius in radii {
        let g = pullback_gamma_check(&x, radius, tol)?;
        checks.push(Check::below(
            format!("relative deviation at |tau| = {radius}"),
            g.max_rel_deviation,
            g.tol,
        ));
        samples.push(g);
    }
    let mut data = json!({
        "r": x.r(),
        "s": x.s(),
        "pole_order": x.conductor(),
        "samples": json(&samples)?,
    });
    if radii.len() >= 2 {
        let exponent = omega_blowup_exponent(&cusp_structure_form(&x), radii)?;
        checks.push(Check::below(
            "blow-up exponent minus conductor",
            (exponent - f64::from(x.conductor())).abs(),
            0.05,
        ));
        data["blowup_exponent"] = json!(exponent);
    }
    Ok(Outcome {
        checks,
        data,
        plot: Vec::new(),
    })
}

pub(crate) fn pv_convergence(config: &ScenarioConfig, preset: &str) -> Result<Outcome, CliError> {
    match preset {
        "lelong-origin" => lelong_origin(config),
        _ => cusp_pairings(config),
    }
}

/// `⟨∂̄(1/ζ)∧dζ/2πi, ξ⟩ = ξ(0)` for polynomial-times-bump test functions.
fn lelong_origin(config: &ScenarioConfig) -> Result<Outcome, CliError> {
    let schedule = config.pv.schedule_or(
        3,
        12,
        Extrapolation::Richardson {
            order: 1.0,
            levels: 2,
        },
    )?;
    let b = BumpProfile::new(0.5, 0.9)?;
    type Poly1 = fn(Cpx) -> Cpx;
    let cases: [(&str, Poly1, Cpx); 3] = [
        ("1 + z + conj(z)", |z| 1.0 + z + z.conj(), c(1.0, 0.0)),
        (
            "2 + |z|^2 - z^2",
            |z| 2.0 + z.norm_sqr() - z * z,
            c(2.0, 0.0),
        ),
        (
            "3i + conj(z)^2 + |z|^2 z",
            |z| c(0.0, 3.0) + z.conj() * z.conj() + z * z.norm_sqr(),
            c(0.0, 3.0),
        ),
    ];
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for (name, poly, exact) in cases {
        let xi = TestForm::new(1, Some(b.outer), move |p| {
            vec![poly(p[0]) * b.value(p[0].norm())]
        });
        let v = lelong_pair(&LelongTarget::Origin, &xi, &schedule)?;
        let err = (v - exact).norm();
        checks.push(Check::below(
            format!("|pairing - xi(0)| for xi = ({name})*bump"),
            err,
            1e-8,
        ));
        rows.push(json!({ "xi": name, "value": v, "exact": exact, "error": err }));
    }
    Ok(Outcome {
        checks,
        data: json!({ "schedule": json(&schedule)?, "cases": rows }),
        plot: Vec::new(),
    })
}

/// Contour and cutoff routes for `⟨φω, ∂̄ψ⟩` on several cusps.
fn cusp_pairings(config: &ScenarioConfig) -> Result<Outcome, CliError> {
    let schedule = config.pv.schedule_or(3, 12, Extrapolation::Aitken)?;
    let tol = config.quadrature.tol();
    let nodes = config.quadrature.angular_nodes.unwrap_or(64);
    let cases: [((u32, u32), i64, [u32; 2]); 5] = [
        ((2, 3), 1, [0, 0]),
        ((2, 3), 3, [0, 0]),
        ((2, 5), 1, [0, 1]),
        ((3, 4), 2, [0, 1]),
        ((3, 5), 4, [0, 1]),
    ];
    let mut gap: f64 = 0.0;
    let mut exact_err: f64 = 0.0;
    let mut rows = Vec::new();
    for ((r, s), k, e) in cases {
        let x = MonomialCurve::new(r, s)?;
        let phi = LaurentPoly::monomial(k, c(1.0, 0.0));
        let xi = Poly::from_terms(2, &[(&e, c(1.0, 0.0))])?;
        let test = PairingTest::new(xi, 0.8)?;
        let exact = pairing_exact(&x, &phi, &test);
        let a = pairing_contour(&x, &phi, &test, &schedule, nodes)?;
        let b = pairing_cutoff(&x, &phi, &test, &schedule, tol)?;
        gap = gap.max((a.value - b.value).norm());
        exact_err = exact_err.max((a.value - exact).norm());
        rows.push(json!({
            "r": r,
            "s": s,
            "phi": format!("tau^{k}"),
            "xi": [e[0], e[1]],
            "contour": a.value,
            "cutoff": b.value,
            "cutoff_order": b.order_estimate,
            "exact": exact,
        }));
    }
    Ok(Outcome {
        checks: vec![
            Check::below("max |contour - cutoff|", gap, 1e-3),
            Check::below("max |contour - residue|", exact_err, 1e-8),
        ],
        data: json!({ "schedule": json(&schedule)?, "cases": rows }),
        plot: Vec::new(),
    })
}
