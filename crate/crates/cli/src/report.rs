//! Run reports and plot data.

use std::collections::BTreeMap;
use std::path::Path;

use koppelman_core::Cpx;
use serde::Serialize;
use serde_json::Value;

use crate::config::ScenarioConfig;
use crate::error::CliError;

/// Version of the report layout, bumped whenever fields change.
pub const ARTIFACT_VERSION: &str =
    concat!("koppelman-cli/", env!("CARGO_PKG_VERSION"), "/report-1");

/// How a check compares its value with the tolerance.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `value < tolerance`
    Below,
    /// `value ≤ tolerance`
    AtMost,
}

/// One pass/fail line of a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, tolerance: f64, relation: Relation) -> Self {
        let passed = match relation {
            Relation::Below => value < tolerance,
            Relation::AtMost => value <= tolerance,
        };
        Check {
            name: name.into(),
            value,
            tolerance,
            relation,
            passed,
        }
    }

    /// Passes when `value < tolerance`; NaN fails.
    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check::new(name, value, tolerance, Relation::Below)
    }

    /// Counts mismatches; passes when there are none.
    pub fn count(name: impl Into<String>, mismatches: usize) -> Self {
        Check::new(name, mismatches as f64, 0.0, Relation::AtMost)
    }
}

/// A gridded value for plotting.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlotRow {
    pub z: Cpx,
    pub value: Cpx,
    pub residual: f64,
}

/// Fields that differ between identical runs.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Meta {
    /// Wall-clock seconds per named phase.
    pub timings: BTreeMap<String, f64>,
}

/// Result of one scenario run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub preset: String,
    pub artifact_version: String,
    pub config: ScenarioConfig,
    pub checks: Vec<Check>,
    pub data: Value,
    pub plot: Vec<PlotRow>,
    pub meta: Meta,
}

#[derive(Serialize)]
struct Canonical<'a> {
    scenario: &'a str,
    preset: &'a str,
    artifact_version: &'a str,
    config: &'a ScenarioConfig,
    checks: &'a [Check],
    data: &'a Value,
    plot: &'a [PlotRow],
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// The report without `meta`, as pretty JSON; identical configurations
    /// give identical bytes.
    pub fn canonical_json(&self) -> Result<String, CliError> {
        let view = Canonical {
            scenario: &self.scenario,
            preset: &self.preset,
            artifact_version: &self.artifact_version,
            config: &self.config,
            checks: &self.checks,
            data: &self.data,
            plot: &self.plot,
        };
        Ok(serde_json::to_string_pretty(&view)?)
    }

    /// The full report including timings.
    pub fn to_json(&self) -> Result<String, CliError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Writes the full report to `path`.
    pub fn write_json(&self, path: &Path) -> Result<(), CliError> {
        let mut text = self.to_json()?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    /// Short human-readable summary, one line per check.
    pub fn summary(&self) -> String {
        let mut out = format!("{} [{}]\n", self.scenario, self.preset);
        for c in &self.checks {
            let op = match c.relation {
                Relation::Below => "<",
                Relation::AtMost => "<=",
            };
            out.push_str(&format!(
                "  {:<4} {}: {:.3e} {op} {:.1e}\n",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.value,
                c.tolerance
            ));
        }
        out
    }
}

/// Writes the plot rows of `report` as CSV with columns
/// `re(z), im(z), re(val), im(val), residual`, in report order.
pub fn emit_plotdata(report: &RunReport, path: &Path) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["re(z)", "im(z)", "re(val)", "im(val)", "residual"])?;
    for row in &report.plot {
        w.write_record(&[
            row.z.re.to_string(),
            row.z.im.to_string(),
            row.value.re.to_string(),
            row.value.im.to_string(),
            row.residual.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Moves every `runtime_s` field out of `value` into `timings`, keyed by its
/// path.
pub(crate) fn extract_timings(value: &mut Value, path: &str, timings: &mut BTreeMap<String, f64>) {
    match value {
        Value::Object(map) => {
            if let Some(t) = map.remove("runtime_s") {
                if let Some(t) = t.as_f64() {
                    timings.insert(
                        if path.is_empty() {
                            "runtime".into()
                        } else {
                            path.to_string()
                        },
                        t,
                    );
                }
            }
            for (k, v) in map.iter_mut() {
                let p = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                extract_timings(v, &p, timings);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter_mut().enumerate() {
                extract_timings(v, &format!("{path}[{i}]"), timings);
            }
        }
        _ => {}
    }
}
