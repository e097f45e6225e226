use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use koppelman_cli::{emit_plotdata, run, CliError, Scenario, ScenarioConfig};
use koppelman_core::Extrapolation;

/// Weighted Koppelman operators for the ∂̄-equation: named experiments with
/// machine-readable reports.
///
/// Exit status: 0 when every check passes, 1 when a check fails, 2 for usage
/// errors, 3 for numerical divergence.
#[derive(Parser, Debug)]
#[command(name = "koppelman", version)]
struct Cli {
    /// TOML scenario configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for `<scenario>.json` and `<scenario>.csv`.
    #[arg(long, global = true, env = "KOPPELMAN_OUT_DIR")]
    out_dir: Option<PathBuf>,
    /// Also write the gridded values as CSV (needs an output directory).
    #[arg(long, global = true)]
    csv: bool,
    /// Print the full JSON report on stdout instead of the summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the scenario named in the configuration file.
    Run(ScenarioArgs),
    /// Check φ = ∂̄Kφ + K∂̄φ + Pφ on a grid. Presets: disc-bump (default),
    /// disc-form, disc-projection, cusp-annulus.
    VerifyKoppelman(ScenarioArgs),
    /// Classify τ^k, 0 ≤ k ≤ kmax, on ζ₁ʳ = ζ₂ˢ as strongly or only weakly
    /// holomorphic.
    CuspClassify(ScenarioArgs),
    /// Residue moments of a Laurent polynomial φ(τ) on the curve.
    MomentCheck(ScenarioArgs),
    /// Hartogs extension through a compact-support solve. Presets: ball
    /// (default), cusp.
    Hartogs(ScenarioArgs),
    /// Compare the ambient structure form pulled back to the chart with
    /// 2πi dτ/τ^c.
    StructureForm(ScenarioArgs),
    /// Principal-value limits. Presets: lelong-origin (default),
    /// cusp-pairings.
    PvConvergence(ScenarioArgs),
    /// Growth of Kφ toward the singular point. Presets: disc (default), cusp.
    AsymptoticProbe(ScenarioArgs),
    /// Weight contract and Hefer identities at random points. Presets:
    /// weights (default), hefer.
    WeightAudit(ScenarioArgs),
}

#[derive(Args, Debug, Default)]
struct ScenarioArgs {
    /// Scenario variant.
    #[arg(long)]
    preset: Option<String>,
    /// Curve exponent r of ζ₁ʳ = ζ₂ˢ [default: 2].
    #[arg(long)]
    r: Option<u32>,
    /// Curve exponent s of ζ₁ʳ = ζ₂ˢ [default: 3].
    #[arg(long)]
    s: Option<u32>,
    /// Largest exponent for cusp-classify [default: 2(r−1)(s−1)].
    #[arg(long)]
    kmax: Option<u32>,
    /// Laurent polynomial in tau, e.g. "tau^-1 + 2*tau^3" [default: tau, or
    /// tau^2 for the cusp Hartogs preset].
    #[arg(long)]
    phi: Option<String>,
    /// Sample radii for structure-form [default: 0.25,0.5,0.9].
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    /// Square grid NxM on [−0.35, 0.35]² for disc presets [default: 5x5].
    #[arg(long)]
    grid: Option<String>,
    /// Seed for random point sets [default: 2024].
    #[arg(long)]
    seed: Option<u64>,
    /// Gauss–Legendre order per radial piece [default: 24 in the plane, 10 in ℂ²].
    #[arg(long)]
    radial_order: Option<usize>,
    /// Angular nodes per circle [default: 128 in the plane, 24 in ℂ²].
    #[arg(long)]
    angular_nodes: Option<usize>,
    /// Latitude nodes in ℂ² [default: 10].
    #[arg(long)]
    polar_nodes: Option<usize>,
    /// Radial pieces per unit length [default: 4 in the plane, 2 in ℂ²].
    #[arg(long)]
    panels: Option<usize>,
    /// Tolerance of adaptive integrals [default: 1e-9].
    #[arg(long)]
    tol: Option<f64>,
    /// First cutoff level, δ = 2^−first [default: 3].
    #[arg(long)]
    pv_first: Option<i32>,
    /// Last cutoff level [default: 12].
    #[arg(long)]
    pv_last: Option<i32>,
    /// none, aitken, or richardson:ORDER:LEVELS [default: richardson:1:2 for
    /// lelong-origin, aitken otherwise].
    #[arg(long, value_parser = parse_extrapolation)]
    extrapolation: Option<Extrapolation>,
}

fn parse_extrapolation(s: &str) -> Result<Extrapolation, String> {
    let mut parts = s.split(':');
    match parts.next() {
        Some("none") => Ok(Extrapolation::None),
        Some("aitken") => Ok(Extrapolation::Aitken),
        Some("richardson") => {
            let order = parts
                .next()
                .and_then(|v| v.parse().ok())
                .ok_or("richardson needs :ORDER:LEVELS")?;
            let levels = parts
                .next()
                .and_then(|v| v.parse().ok())
                .ok_or("richardson needs :ORDER:LEVELS")?;
            Ok(Extrapolation::Richardson { order, levels })
        }
        _ => Err(format!("unknown extrapolation `{s}`")),
    }
}

impl ScenarioArgs {
    fn apply(self, cfg: &mut ScenarioConfig) {
        let g = &mut cfg.geometry;
        g.preset = self.preset.or(g.preset.take());
        g.r = self.r.unwrap_or(g.r);
        g.s = self.s.unwrap_or(g.s);
        g.kmax = self.kmax.or(g.kmax);
        g.phi = self.phi.or(g.phi.take());
        if let Some(r) = self.radii {
            g.radii = r;
        }
        if let Some(name) = self.grid {
            cfg.grid.name = name;
        }
        cfg.grid.seed = self.seed.unwrap_or(cfg.grid.seed);
        let q = &mut cfg.quadrature;
        q.radial_order = self.radial_order.or(q.radial_order);
        q.angular_nodes = self.angular_nodes.or(q.angular_nodes);
        q.polar_nodes = self.polar_nodes.or(q.polar_nodes);
        q.panels = self.panels.or(q.panels);
        q.tol = self.tol.or(q.tol);
        cfg.pv.first = self.pv_first.or(cfg.pv.first);
        cfg.pv.last = self.pv_last.or(cfg.pv.last);
        cfg.pv.extrapolation = self.extrapolation.or(cfg.pv.extrapolation);
    }
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    let (scenario, args) = match cli.command {
        Command::Run(a) => (None, a),
        Command::VerifyKoppelman(a) => (Some(Scenario::VerifyKoppelman), a),
        Command::CuspClassify(a) => (Some(Scenario::CuspClassify), a),
        Command::MomentCheck(a) => (Some(Scenario::MomentCheck), a),
        Command::Hartogs(a) => (Some(Scenario::Hartogs), a),
        Command::StructureForm(a) => (Some(Scenario::StructureForm), a),
        Command::PvConvergence(a) => (Some(Scenario::PvConvergence), a),
        Command::AsymptoticProbe(a) => (Some(Scenario::AsymptoticProbe), a),
        Command::WeightAudit(a) => (Some(Scenario::WeightAudit), a),
    };
    if let Some(s) = scenario {
        if cfg.scenario.is_some_and(|c| c != s) {
            cfg.geometry.preset = None;
        }
        cfg.scenario = Some(s);
    }
    args.apply(&mut cfg);
    if cli.out_dir.is_some() {
        cfg.output.dir = cli.out_dir;
    }
    cfg.output.csv |= cli.csv;

    let report = run(&cfg)?;
    if cli.json {
        println!("{}", report.to_json()?);
    } else {
        print!("{}", report.summary());
    }
    if let Some(dir) = &cfg.output.dir {
        std::fs::create_dir_all(dir)?;
        report.write_json(&dir.join(format!("{}.json", report.scenario)))?;
        if cfg.output.csv {
            emit_plotdata(&report, &dir.join(format!("{}.csv", report.scenario)))?;
        }
    } else if cfg.output.csv {
        return Err(CliError::Usage(
            "--csv needs --out-dir or output.dir".into(),
        ));
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
