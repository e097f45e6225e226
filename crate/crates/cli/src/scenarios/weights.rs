//! Pointwise audits of weights and Hefer forms.

use koppelman_core::{
    ball_weight, hefer_single, singular_weight_ga, weight_product, BumpProfile, Cpx, Poly,
    WeightForm, DEFAULT_FD_STEP,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{random_in_ball, rng, Outcome};
use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::report::Check;

pub(crate) fn weight_audit(config: &ScenarioConfig, preset: &str) -> Result<Outcome, CliError> {
    if preset == "hefer" {
        hefer(config)
    } else {
        weights(config)
    }
}

/// `ζ` in the transition shell `1.3 ≤ |ζ| ≤ 1.7` of the ball weight's cutoff.
fn shell_point(rng: &mut ChaCha8Rng, away_from_a: bool) -> Vec<Cpx> {
    loop {
        let r = rng.gen_range(1.3..1.7);
        let mut p = random_in_ball(rng, 2, 1.0);
        let n = p.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-3 {
            continue;
        }
        p.iter_mut().for_each(|v| *v *= r / n);
        if !away_from_a || p[0].norm() >= 0.25 {
            return p;
        }
    }
}

fn inner_point(rng: &mut ChaCha8Rng) -> Vec<Cpx> {
    loop {
        let p = random_in_ball(rng, 2, 1.0);
        if p[0].norm() >= 0.25 {
            return p;
        }
    }
}

/// `∇_η g = 0` for the ball weight, a product weight and `g_a`, `a = (ζ₁)`.
fn weights(config: &ScenarioConfig) -> Result<Outcome, CliError> {
    let chi = BumpProfile::new(1.25, 1.75)?;
    let ball = ball_weight(chi, 2)?;
    let a = Poly::var(2, 0)?;
    let ga = singular_weight_ga(std::slice::from_ref(&a), &[hefer_single(&a)], 1)?;
    let product = weight_product(&ball, &ga)?;
    let mut rng = rng(config);
    type Sampler = fn(&mut ChaCha8Rng) -> Vec<Cpx>;
    let cases: [(&str, &WeightForm, Sampler); 3] = [
        ("ball weight", &ball, |r| shell_point(r, false)),
        ("ball weight ^ g_a", &product, |r| shell_point(r, true)),
        ("g_a, a = zeta1", &ga, inner_point),
    ];
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for (name, g, sample) in cases {
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let zeta = sample(&mut rng);
            let z = random_in_ball(&mut rng, 2, 0.5);
            worst = worst.max(g.contract_residual(&zeta, &z, DEFAULT_FD_STEP)?);
        }
        checks.push(Check::below(
            format!("max |nabla_eta g| for {name}"),
            worst,
            1e-5,
        ));
        rows.push(json!({ "weight": name, "pairs": 20, "max_residual": worst }));
    }
    Ok(Outcome {
        checks,
        data: json!({ "fd_step": DEFAULT_FD_STEP, "weights": rows }),
        plot: Vec::new(),
    })
}

/// `δ_η H = h(ζ) − h(z)` for `h = ζ₁² − ζ₂³`.
fn hefer(config: &ScenarioConfig) -> Result<Outcome, CliError> {
    let h = &Poly::var(2, 0)?.pow(2) - &Poly::var(2, 1)?.pow(3);
    let hf = hefer_single(&h);
    let direct = |p: &[Cpx]| p[0] * p[0] - p[1] * p[1] * p[1];
    let mut rng = rng(config);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let zeta = random_in_ball(&mut rng, 2, 1.0);
        let z = random_in_ball(&mut rng, 2, 1.0);
        let eta: Vec<Cpx> = zeta.iter().zip(&z).map(|(a, b)| a - b).collect();
        let d = hf.eval(&zeta, &z)?.contract_eta(&eta)?.scalar_part();
        worst = worst.max((d - (direct(&zeta) - direct(&z))).norm());
    }
    Ok(Outcome {
        checks: vec![Check::below(
            "max |delta_eta H - (h(zeta) - h(z))|",
            worst,
            1e-12,
        )],
        data: json!({ "h": "zeta1^2 - zeta2^3", "pairs": 50, "max_residual": worst }),
        plot: Vec::new(),
    })
}
