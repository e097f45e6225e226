//! The named experiments behind each subcommand.

mod curves;
mod operators;
mod weights;

use std::collections::BTreeMap;
use std::time::Instant;

use koppelman_core::Cpx;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::config::{Scenario, ScenarioConfig};
use crate::error::CliError;
use crate::report::{extract_timings, Check, Meta, PlotRow, RunReport, ARTIFACT_VERSION};

/// What a scenario produces before it is wrapped into a [`RunReport`].
pub(crate) struct Outcome {
    pub checks: Vec<Check>,
    pub data: Value,
    pub plot: Vec<PlotRow>,
}

/// Runs the configured scenario.
///
/// Numerical failures that the scenario can measure end up as failing
/// checks; configuration problems and hard numerical errors are returned.
pub fn run(config: &ScenarioConfig) -> Result<RunReport, CliError> {
    let scenario = config.scenario()?;
    let preset = config.preset()?.to_string();
    let start = Instant::now();
    let outcome = match scenario {
        Scenario::VerifyKoppelman => operators::verify_koppelman(config, &preset)?,
        Scenario::Hartogs => operators::hartogs(config, &preset)?,
        Scenario::AsymptoticProbe => operators::asymptotic_probe(config, &preset)?,
        Scenario::CuspClassify => curves::cusp_classify(config)?,
        Scenario::MomentCheck => curves::moment_check(config)?,
        Scenario::StructureForm => curves::structure_form(config)?,
        Scenario::PvConvergence => curves::pv_convergence(config, &preset)?,
        Scenario::WeightAudit => weights::weight_audit(config, &preset)?,
    };
    let mut data = outcome.data;
    let mut timings = BTreeMap::new();
    extract_timings(&mut data, "", &mut timings);
    timings.insert("total".into(), start.elapsed().as_secs_f64());
    Ok(RunReport {
        scenario: scenario.name().into(),
        preset,
        artifact_version: ARTIFACT_VERSION.into(),
        config: config.clone(),
        checks: outcome.checks,
        data,
        plot: outcome.plot,
        meta: Meta { timings },
    })
}

fn c(re: f64, im: f64) -> Cpx {
    Cpx::new(re, im)
}

fn rng(config: &ScenarioConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(config.grid.seed)
}

/// Uniform point of the closed disc of radius `r` in ℂ.
fn random_in_disc(rng: &mut ChaCha8Rng, r: f64) -> Cpx {
    Cpx::from_polar(
        r * rng.gen::<f64>().sqrt(),
        std::f64::consts::TAU * rng.gen::<f64>(),
    )
}

/// Uniform point of the ball of radius `r` in `ℂ^dim`, by rejection.
fn random_in_ball(rng: &mut ChaCha8Rng, dim: usize, r: f64) -> Vec<Cpx> {
    loop {
        let p: Vec<Cpx> = (0..dim)
            .map(|_| c(rng.gen_range(-r..r), rng.gen_range(-r..r)))
            .collect();
        if p.iter().map(|v| v.norm_sqr()).sum::<f64>() <= r * r {
            return p;
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> Result<Value, CliError> {
    Ok(serde_json::to_value(value)?)
}

/// Brute-force membership in the semigroup generated by `r` and `s`.
fn in_semigroup(r: u32, s: u32, k: i64) -> bool {
    if k < 0 {
        return false;
    }
    let k = k as u64;
    (0..=k / r as u64).any(|a| (k - a * r as u64).is_multiple_of(s as u64))
}
