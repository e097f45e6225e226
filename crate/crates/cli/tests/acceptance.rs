//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use koppelman_cli::{emit_plotdata, run, RunReport, Scenario, ScenarioConfig};

struct Outcome {
    passed: bool,
    detail: String,
}

fn config(scenario: Scenario, preset: &str) -> ScenarioConfig {
    ScenarioConfig::for_scenario(scenario).with_preset(preset)
}

fn curve_config(scenario: Scenario, r: u32, s: u32) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::for_scenario(scenario);
    cfg.geometry.r = r;
    cfg.geometry.s = s;
    cfg
}

/// Configurations behind criteria 1–8, in order.
fn criterion_configs(n: usize) -> Vec<ScenarioConfig> {
    match n {
        1 => [(2, 3), (2, 5), (3, 4), (3, 5)]
            .iter()
            .map(|&(r, s)| curve_config(Scenario::CuspClassify, r, s))
            .collect(),
        2 => [(2, 3), (3, 4)]
            .iter()
            .map(|&(r, s)| curve_config(Scenario::StructureForm, r, s))
            .collect(),
        3 => vec![config(Scenario::VerifyKoppelman, "disc-bump")],
        4 => vec![config(Scenario::VerifyKoppelman, "disc-projection")],
        5 => vec![config(Scenario::WeightAudit, "weights")],
        6 => vec![config(Scenario::WeightAudit, "hefer")],
        7 => vec![config(Scenario::PvConvergence, "lelong-origin")],
        8 => vec![config(Scenario::PvConvergence, "cusp-pairings")],
        9 => vec![config(Scenario::Hartogs, "ball")],
        10 => vec![
            config(Scenario::AsymptoticProbe, "disc"),
            config(Scenario::AsymptoticProbe, "cusp"),
        ],
        _ => Vec::new(),
    }
}

fn run_all(configs: &[ScenarioConfig]) -> Result<Vec<RunReport>, String> {
    configs
        .iter()
        .map(|c| run(c).map_err(|e| e.to_string()))
        .collect()
}

fn describe(reports: &[RunReport]) -> String {
    let failed: Vec<String> = reports
        .iter()
        .flat_map(|r| {
            r.failed_checks()
                .map(move |c| format!("{}: {} = {:.3e}", r.scenario, c.name, c.value))
        })
        .collect();
    if failed.is_empty() {
        let worst = reports
            .iter()
            .flat_map(|r| r.checks.iter())
            .filter(|c| c.tolerance > 0.0)
            .map(|c| c.value / c.tolerance)
            .fold(0.0, f64::max);
        format!(
            "{} checks, worst value/tolerance {worst:.2e}",
            reports.iter().map(|r| r.checks.len()).sum::<usize>()
        )
    } else {
        failed.join("; ")
    }
}

fn criterion(n: usize) -> Outcome {
    match run_all(&criterion_configs(n)) {
        Err(e) => Outcome {
            passed: false,
            detail: format!("error: {e}"),
        },
        Ok(reports) => {
            let mut passed = reports.iter().all(RunReport::passed);
            let mut detail = describe(&reports);
            if n == 1 {
                let expected: [&[u64]; 4] = [&[1], &[1, 3], &[1, 2, 5], &[1, 2, 4, 7]];
                for (r, want) in reports.iter().zip(expected) {
                    let got: Vec<u64> = r.data["non_extending"]
                        .as_array()
                        .map(|a| a.iter().filter_map(|v| v.as_u64()).collect())
                        .unwrap_or_default();
                    if got != want {
                        passed = false;
                        detail = format!("non-extending set {got:?}, expected {want:?}");
                    }
                }
            }
            Outcome { passed, detail }
        }
    }
}

/// Reruns criteria 1–8 and compares canonical reports and plot files byte
/// for byte.
fn determinism() -> Outcome {
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => {
            return Outcome {
                passed: false,
                detail: format!("tempdir: {e}"),
            }
        }
    };
    let mut compared = 0;
    for n in 1..=8 {
        for (i, cfg) in criterion_configs(n).iter().enumerate() {
            let mut bytes = Vec::new();
            for round in 0..2 {
                let report = match run(cfg) {
                    Ok(r) => r,
                    Err(e) => {
                        return Outcome {
                            passed: false,
                            detail: format!("criterion {n}: {e}"),
                        }
                    }
                };
                let path = dir.path().join(format!("c{n}-{i}-{round}.csv"));
                let csv = emit_plotdata(&report, &path)
                    .and_then(|_| std::fs::read(&path).map_err(Into::into));
                match (report.canonical_json(), csv) {
                    (Ok(json), Ok(csv)) => bytes.push((json, csv)),
                    (Err(e), _) | (_, Err(e)) => {
                        return Outcome {
                            passed: false,
                            detail: format!("criterion {n}: {e}"),
                        }
                    }
                }
            }
            if bytes[0] != bytes[1] {
                return Outcome {
                    passed: false,
                    detail: format!("criterion {n} config {i}: reports differ between runs"),
                };
            }
            compared += 1;
        }
    }
    Outcome {
        passed: true,
        detail: format!("{compared} configurations byte-identical across two runs"),
    }
}

fn main() -> ExitCode {
    let limits: [(usize, Duration); 11] = [
        (1, Duration::from_secs(1)),
        (2, Duration::from_secs(5)),
        (3, Duration::from_secs(60)),
        (4, Duration::from_secs(30)),
        (5, Duration::from_secs(10)),
        (6, Duration::from_secs(1)),
        (7, Duration::from_secs(5)),
        (8, Duration::from_secs(30)),
        (9, Duration::from_secs(600)),
        (10, Duration::from_secs(60)),
        (11, Duration::MAX),
    ];
    let mut all = true;
    for (n, limit) in limits {
        let start = Instant::now();
        let mut outcome = if n == 11 { determinism() } else { criterion(n) };
        let elapsed = start.elapsed();
        if elapsed > limit {
            outcome.passed = false;
            outcome.detail = format!(
                "{} (runtime {:.2?} over {:?})",
                outcome.detail, elapsed, limit
            );
        }
        all &= outcome.passed;
        println!(
            "criterion {n}: {} [{:.2?}] {}",
            if outcome.passed { "PASS" } else { "FAIL" },
            elapsed,
            outcome.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
