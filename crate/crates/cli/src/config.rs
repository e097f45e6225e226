//! Scenario configuration: a TOML file with nested sections, overridable by
//! command-line flags.
//!
//! ```toml
//! scenario = "cusp-classify"
//!
//! [geometry]
//! r = 2
//! s = 3
//! kmax = 8
//!
//! [pv]
//! first = 3
//! last = 12
//! extrapolation = { kind = "richardson", order = 1.0, levels = 2 }
//!
//! [output]
//! csv = true
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use koppelman_core::{Extrapolation, PVSchedule, Rule};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// The named experiments.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    VerifyKoppelman,
    CuspClassify,
    MomentCheck,
    Hartogs,
    StructureForm,
    PvConvergence,
    AsymptoticProbe,
    WeightAudit,
}

impl Scenario {
    pub const ALL: [Scenario; 8] = [
        Scenario::VerifyKoppelman,
        Scenario::CuspClassify,
        Scenario::MomentCheck,
        Scenario::Hartogs,
        Scenario::StructureForm,
        Scenario::PvConvergence,
        Scenario::AsymptoticProbe,
        Scenario::WeightAudit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::VerifyKoppelman => "verify-koppelman",
            Scenario::CuspClassify => "cusp-classify",
            Scenario::MomentCheck => "moment-check",
            Scenario::Hartogs => "hartogs",
            Scenario::StructureForm => "structure-form",
            Scenario::PvConvergence => "pv-convergence",
            Scenario::AsymptoticProbe => "asymptotic-probe",
            Scenario::WeightAudit => "weight-audit",
        }
    }

    /// Presets accepted by the scenario; the first one is the default.
    pub fn presets(self) -> &'static [&'static str] {
        match self {
            Scenario::VerifyKoppelman => {
                &["disc-bump", "disc-form", "disc-projection", "cusp-annulus"]
            }
            Scenario::CuspClassify | Scenario::MomentCheck | Scenario::StructureForm => {
                &["default"]
            }
            Scenario::Hartogs => &["ball", "cusp"],
            Scenario::PvConvergence => &["lelong-origin", "cusp-pairings"],
            Scenario::AsymptoticProbe => &["disc", "cusp"],
            Scenario::WeightAudit => &["weights", "hefer"],
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Scenario::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown scenario `{s}`")))
    }
}

/// A full scenario configuration.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub scenario: Option<Scenario>,
    pub geometry: GeometryConfig,
    pub quadrature: QuadratureConfig,
    pub pv: PvConfig,
    pub grid: GridConfig,
    pub output: OutputConfig,
}

/// Curve and domain parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometryConfig {
    /// Scenario variant; see [`Scenario::presets`].
    pub preset: Option<String>,
    /// Curve exponents of `ζ₁ʳ = ζ₂ˢ` (default 2, 3).
    pub r: u32,
    pub s: u32,
    /// Largest monomial exponent for `cusp-classify` (default `2c`).
    pub kmax: Option<u32>,
    /// Laurent polynomial in `tau` for `moment-check` and the cusp Hartogs
    /// preset (default `tau`).
    pub phi: Option<String>,
    /// Chart radii for `structure-form` (default 0.25, 0.5, 0.9).
    pub radii: Vec<f64>,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            preset: None,
            r: 2,
            s: 3,
            kmax: None,
            phi: None,
            radii: vec![0.25, 0.5, 0.9],
        }
    }
}

/// Fixed node layout for operator evaluations; unset fields keep the
/// per-geometry defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureConfig {
    pub radial_order: Option<usize>,
    pub angular_nodes: Option<usize>,
    pub polar_nodes: Option<usize>,
    pub panels: Option<usize>,
    /// Tolerance of adaptive integrals (default 1e-9).
    pub tol: Option<f64>,
}

impl QuadratureConfig {
    pub fn apply(&self, mut rule: Rule) -> Rule {
        if let Some(v) = self.radial_order {
            rule.radial_order = v;
        }
        if let Some(v) = self.angular_nodes {
            rule.angular_nodes = v;
        }
        if let Some(v) = self.polar_nodes {
            rule.polar_nodes = v;
        }
        if let Some(v) = self.panels {
            rule.panels = v;
        }
        rule
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(1e-9)
    }
}

/// Cutoff schedule `δ_j = 2^{−j}`, `j = first..=last`; unset fields keep the
/// preset's schedule.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PvConfig {
    pub first: Option<i32>,
    pub last: Option<i32>,
    pub extrapolation: Option<Extrapolation>,
}

impl PvConfig {
    /// The configured schedule, filling gaps from `(first, last, extrapolation)`.
    pub fn schedule_or(
        &self,
        first: i32,
        last: i32,
        extrapolation: Extrapolation,
    ) -> Result<PVSchedule, CliError> {
        let first = self.first.unwrap_or(first);
        let last = self.last.unwrap_or(last);
        if last <= first {
            return Err(CliError::Usage("pv.last must exceed pv.first".into()));
        }
        if first < 0 || last > 40 {
            return Err(CliError::Usage(
                "pv.first and pv.last must lie in 0..=40".into(),
            ));
        }
        let s = PVSchedule::dyadic(first, last, self.extrapolation.unwrap_or(extrapolation));
        s.validate()
            .map_err(|e| CliError::Usage(format!("pv.extrapolation: {e}")))?;
        Ok(s)
    }
}

/// Evaluation point sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    /// `NxM` square grid on `[−0.35, 0.35]²` for disc presets; ignored
    /// elsewhere (default `5x5`).
    pub name: String,
    /// Seed for random point sets (default 2024).
    pub seed: u64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            name: "5x5".into(),
            seed: 2024,
        }
    }
}

impl GridConfig {
    pub fn dims(&self) -> Result<(usize, usize), CliError> {
        let bad = || CliError::Usage(format!("grid.name must look like 5x5, got `{}`", self.name));
        let (a, b) = self.name.split_once('x').ok_or_else(bad)?;
        let n: usize = a.parse().map_err(|_| bad())?;
        let m: usize = b.parse().map_err(|_| bad())?;
        if n == 0 || m == 0 || n * m > 10_000 {
            return Err(bad());
        }
        Ok((n, m))
    }
}

/// Where reports go.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Directory for `<scenario>.json` (and `.csv`); when unset the report
    /// is only summarized on stdout.
    pub dir: Option<PathBuf>,
    /// Also write the gridded values as CSV.
    pub csv: bool,
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn for_scenario(scenario: Scenario) -> Self {
        ScenarioConfig {
            scenario: Some(scenario),
            ..Default::default()
        }
    }

    pub fn with_preset(mut self, preset: &str) -> Self {
        self.geometry.preset = Some(preset.into());
        self
    }

    pub fn scenario(&self) -> Result<Scenario, CliError> {
        self.scenario
            .ok_or_else(|| CliError::Usage("no scenario given".into()))
    }

    /// The preset, checked against the scenario.
    pub fn preset(&self) -> Result<&str, CliError> {
        let scenario = self.scenario()?;
        let allowed = scenario.presets();
        match self.geometry.preset.as_deref() {
            None => Ok(allowed[0]),
            Some(p) if allowed.contains(&p) => Ok(p),
            Some(p) => Err(CliError::Usage(format!(
                "geometry.preset `{p}` is not valid for {scenario}; expected one of {}",
                allowed.join(", ")
            ))),
        }
    }
}
