//! Scenarios that apply the integral operators.

use std::sync::Arc;

use koppelman_core::solver::{
    annulus_grid, dbar_of_p, disc_rule, square_grid, CompactOptions, HartogsCase,
};
use koppelman_core::{
    ball_weight, hartogs_extend, projection_p, BumpProfile, ChartForm, Cpx, KernelAssembly,
    MonomialCurve, DEFAULT_FD_STEP,
};
use serde_json::json;

use super::curves::{curve, parse_phi};
use super::{c, json, random_in_disc, rng, Outcome};
use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::report::{Check, PlotRow};

/// Cutoff of the ball weight: identically one near the closed unit ball.
fn weight_cutoff() -> BumpProfile {
    BumpProfile {
        inner: 1.25,
        outer: 1.75,
    }
}

/// Support profile of the test data, one on `|ζ| ≤ 0.6`.
fn data_bump() -> BumpProfile {
    BumpProfile {
        inner: 0.6,
        outer: 0.9,
    }
}

fn disc_assembly(config: &ScenarioConfig) -> Result<KernelAssembly, CliError> {
    let a = KernelAssembly::disc(ball_weight(weight_cutoff(), 1)?)?;
    Ok(a.with_rule(config.quadrature.apply(disc_rule())))
}

fn cusp_assembly(config: &ScenarioConfig, x: MonomialCurve) -> Result<KernelAssembly, CliError> {
    let a = KernelAssembly::cusp(x, ball_weight(weight_cutoff(), 2)?)?;
    let rule = config.quadrature.apply(a.rule);
    Ok(a.with_rule(rule))
}

/// Pullback of `ζ₂(1 − |ζ|²/0.81)⁴ dζ̄₂`.
fn cusp_test_form(x: &MonomialCurve) -> ChartForm {
    ChartForm::pullback_01(x, |z| {
        let r2 = z[0].norm_sqr() + z[1].norm_sqr();
        let b = if r2 < 0.81 {
            (1.0 - r2 / 0.81).powi(4)
        } else {
            0.0
        };
        [c(0.0, 0.0), z[1] * b]
    })
    .with_support(x.chart_radius(0.9))
    .regular_at_origin()
}

fn disc_grid(config: &ScenarioConfig) -> Result<Vec<Vec<Cpx>>, CliError> {
    let (n, m) = config.grid.dims()?;
    Ok(square_grid(0.35, n, m))
}

pub(crate) fn verify_koppelman(config: &ScenarioConfig, preset: &str) -> Result<Outcome, CliError> {
    let (assembly, phi, grid, tol, label) = match preset {
        "disc-bump" => {
            let b = data_bump();
            let phi = ChartForm::function(1, move |w| w[0].conj() * b.value(w[0].norm()))?
                .with_bump_support(&b);
            (
                disc_assembly(config)?,
                phi,
                disc_grid(config)?,
                1e-4,
                "conj(z)*bump",
            )
        }
        "disc-form" => {
            let b = data_bump();
            let phi = ChartForm::new(1, 1, move |w| {
                vec![(w[0] * w[0] + w[0].conj()) * b.value(w[0].norm())]
            })?
            .with_bump_support(&b);
            (
                disc_assembly(config)?,
                phi,
                disc_grid(config)?,
                1e-4,
                "(z^2 + conj(z))*bump dzbar",
            )
        }
        "disc-projection" => return disc_projection(config),
        _ => {
            let x = curve(config)?;
            let grid = annulus_grid(0.3, 0.6, 2, 3);
            (
                cusp_assembly(config, x)?,
                cusp_test_form(&x),
                grid,
                1e-3,
                "zeta2*(1-|zeta|^2/0.81)^4 dzeta2bar",
            )
        }
    };
    let report = koppelman_core::verify_koppelman(&assembly, &phi, &grid)?;
    let plot = report
        .points
        .iter()
        .map(|p| PlotRow {
            z: p.z[0],
            value: p.rhs[0],
            residual: p.residual,
        })
        .collect();
    Ok(Outcome {
        checks: vec![Check::below(
            "max residual of the Koppelman identity",
            report.max_residual,
            tol,
        )],
        data: json!({
            "phi": label,
            "rule": json(&assembly.rule)?,
            "solve": json(&report)?,
        }),
        plot,
    })
}

/// `Pφ` is holomorphic for any `φ`, and reproduces holomorphic `φ`.
fn disc_projection(config: &ScenarioConfig) -> Result<Outcome, CliError> {
    let assembly = disc_assembly(config)?;
    let mut rng = rng(config);
    let points: Vec<Cpx> = (0..20).map(|_| random_in_disc(&mut rng, 0.5)).collect();
    let forms: [(&str, ChartForm); 3] = [
        ("conj(z)", ChartForm::function(1, |w| w[0].conj())?),
        (
            "|z|^2",
            ChartForm::function(1, |w| c(w[0].norm_sqr(), 0.0))?,
        ),
        ("z^2", ChartForm::function(1, |w| w[0] * w[0])?),
    ];
    let mut checks = Vec::new();
    let mut dbar_max = Vec::new();
    for (name, phi) in &forms {
        let mut worst: f64 = 0.0;
        for &z in &points {
            let d = dbar_of_p(&assembly, phi, &[z], DEFAULT_FD_STEP)?;
            worst = worst.max(d[0].norm());
        }
        checks.push(Check::below(format!("max |dbar P({name})|"), worst, 1e-5));
        dbar_max.push(json!({ "phi": name, "max_dbar": worst }));
    }
    let mut plot = Vec::with_capacity(points.len());
    let mut reproduce: f64 = 0.0;
    for &z in &points {
        let v = projection_p(&assembly, &forms[2].1, &[z])?;
        let err = (v - z * z).norm();
        reproduce = reproduce.max(err);
        plot.push(PlotRow {
            z,
            value: v,
            residual: err,
        });
    }
    checks.push(Check::below("max |P(z^2) - z^2|", reproduce, 1e-6));
    Ok(Outcome {
        checks,
        data: json!({
            "points": points,
            "dbar": dbar_max,
            "max_reproduction_error": reproduce,
        }),
        plot,
    })
}

pub(crate) fn hartogs(config: &ScenarioConfig, preset: &str) -> Result<Outcome, CliError> {
    if preset == "ball" {
        hartogs_ball()
    } else {
        hartogs_cusp(config)
    }
}

/// Extends `1/(ζ₁ − 2)` from outside `{|ζ| ≤ 1/2}` in ℂ².
fn hartogs_ball() -> Result<Outcome, CliError> {
    let exact = |w: &[Cpx]| c(1.0, 0.0) / (w[0] - c(2.0, 0.0));
    let case = HartogsCase::Ball {
        phi: Arc::new(exact),
        cutoff: data_bump(),
    };
    let points = vec![
        vec![c(0.0, 0.0), c(0.0, 0.0)],
        vec![c(0.2, 0.0), c(0.0, 0.1)],
        vec![c(-0.3, 0.1), c(0.2, 0.0)],
        vec![c(0.0, 0.25), c(-0.1, -0.2)],
        vec![c(0.35, -0.1), c(0.05, 0.15)],
    ];
    let options = CompactOptions {
        outside: vec![vec![c(1.2, 0.0), c(0.0, 0.2)]],
        ..CompactOptions::default()
    };
    let report = hartogs_extend(&case, &points, &options)?;
    let mut worst: f64 = 0.0;
    let mut rows = Vec::new();
    for v in &report.values {
        let want = exact(&v.z);
        let rel = (v.value - want).norm() / want.norm();
        worst = worst.max(rel);
        rows.push(json!({ "z": v.z, "value": v.value, "exact": want, "rel_error": rel }));
    }
    let missing = points.len() - report.values.len();
    Ok(Outcome {
        checks: vec![
            Check::count("points without an extension value", missing),
            Check::below("max relative error against 1/(z1 - 2)", worst, 1e-2),
            Check::below(
                "support leak outside the cutoff",
                report.solve.support_leak,
                1e-4,
            ),
        ],
        data: json!({
            "phi": "1/(zeta1 - 2)",
            "cutoff": [data_bump().inner, data_bump().outer],
            "extends": report.extends,
            "values": rows,
            "solve": json(&report.solve)?,
        }),
        plot: Vec::new(),
    })
}

/// Extends `φ(τ)` across the cusp point, or reports the obstruction.
fn hartogs_cusp(config: &ScenarioConfig) -> Result<Outcome, CliError> {
    let x = curve(config)?;
    let phi = parse_phi(config, "tau^2")?;
    let case = HartogsCase::Cusp {
        curve: x,
        phi: phi.clone(),
        cutoff: data_bump(),
    };
    let points = vec![vec![c(0.3, 0.2)], vec![c(-0.2, 0.35)], vec![c(0.1, -0.4)]];
    let options = CompactOptions {
        check_dbar: true,
        outside: vec![vec![Cpx::from_polar(x.chart_radius(1.2), 0.1)]],
        ..CompactOptions::default()
    };
    let report = hartogs_extend(&case, &points, &options)?;
    let moments = report
        .moments
        .as_ref()
        .ok_or_else(|| CliError::Usage("cusp case returned no moments".into()))?;

    // ∫ ∂̄χ·φ·ζ₁^iζ₂^j ω = −(2πi)²·Res(φ τ^{si+rj−c}) = 4π²·[τ^{c−1−si−rj}]φ
    let four_pi2 = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
    let mut obstruction_err: f64 = 0.0;
    for o in &report.solve.obstruction {
        let (i, j) = o.monomial;
        let exp = i64::from(x.conductor()) - 1 - i64::from(x.s() * i + x.r() * j);
        let want = phi.coeff(exp) * four_pi2;
        obstruction_err = obstruction_err.max((o.value - want).norm() / (1.0 + want.norm()));
    }
    let mut checks = vec![
        Check::count(
            "moment verdict differs from solve verdict",
            usize::from(moments.extends != report.extends),
        ),
        Check::below(
            "max relative obstruction error against residues",
            obstruction_err,
            1e-8,
        ),
    ];
    let mut plot = Vec::new();
    if report.extends {
        let rep = report
            .representative
            .as_ref()
            .ok_or_else(|| CliError::Usage("extension without representative".into()))?;
        let mut worst: f64 = 0.0;
        for v in &report.values {
            let want = rep.eval(&x.point(v.z[0]));
            let err = (v.value - want).norm();
            worst = worst.max(err);
            plot.push(PlotRow {
                z: v.z[0],
                value: v.value,
                residual: err,
            });
        }
        let necessity = report
            .solve
            .necessity
            .iter()
            .map(|o| o.value.norm())
            .fold(0.0, f64::max);
        checks.push(Check::count(
            "points without an extension value",
            points.len() - report.values.len(),
        ));
        checks.push(Check::below(
            "max error against the polynomial representative",
            worst,
            1e-6,
        ));
        checks.push(Check::below(
            "dbar residual of the solution",
            report.solve.dbar_residual.unwrap_or(f64::NAN),
            1e-6,
        ));
        checks.push(Check::below(
            "support leak outside the cutoff",
            report.solve.support_leak,
            1e-8,
        ));
        checks.push(Check::below("max necessity integral", necessity, 1e-6));
    }
    Ok(Outcome {
        checks,
        data: json!({
            "r": x.r(),
            "s": x.s(),
            "phi": phi.to_string(),
            "extends": report.extends,
            "report": json(&report)?,
        }),
        plot,
    })
}

pub(crate) fn asymptotic_probe(config: &ScenarioConfig, preset: &str) -> Result<Outcome, CliError> {
    let b = data_bump();
    let (assembly, phi) = if preset == "disc" {
        let phi = ChartForm::new(1, 1, move |w| vec![(1.0 + w[0]) * b.value(w[0].norm())])?
            .with_bump_support(&b);
        (disc_assembly(config)?, phi)
    } else {
        let x = curve(config)?;
        let phi = ChartForm::pullback_01(&x, |z| {
            let r2 = z[0].norm_sqr() + z[1].norm_sqr();
            let b = if r2 < 0.81 {
                (1.0 - r2 / 0.81).powi(4)
            } else {
                0.0
            };
            [c(0.0, 0.0), c(b, 0.0)]
        })
        .with_support(x.chart_radius(0.9));
        (cusp_assembly(config, x)?, phi)
    };
    let path: Vec<Vec<Cpx>> = (0..8)
        .map(|j| vec![Cpx::from_polar(0.5 * 0.6f64.powi(j), 0.7)])
        .collect();
    let stability = 0.3;
    let report = koppelman_core::asymptotic_probe(&assembly, &phi, &path, stability)?;
    let plot = path
        .iter()
        .zip(&report.values)
        .map(|(w, v)| PlotRow {
            z: w[0],
            value: *v,
            residual: 0.0,
        })
        .collect();
    let mut checks = Vec::new();
    if preset == "disc" {
        checks.push(Check::below("fitted blow-up exponent", report.slope, 0.2));
    } else {
        checks.push(Check::count(
            "non-finite fitted exponent",
            usize::from(!report.slope.is_finite()),
        ));
        checks.push(Check::new(
            "|tail exponent - exponent|",
            (report.tail_slope - report.slope).abs(),
            stability,
            crate::report::Relation::AtMost,
        ));
    }
    Ok(Outcome {
        checks,
        data: json!({
            "fitted_exponent_bound": report.slope.max(report.tail_slope),
            "probe": json(&report)?,
        }),
        plot,
    })
}
