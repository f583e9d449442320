mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fho_core::classical::{
    constant_of_motion, integration_constants, perturbation_w, trajectory, ClassicalState,
};
use fho_core::experiments::{recommended_step, run_scenario, sweep_point, sweep_with, Scenario};
use fho_core::validation::{run_all, ValidationConfig};
use fho_core::{Error, IntegrationSettings, OscillatorParams, SchemeKind};
use serde_json::json;

use config::{load_file, ConfigError, Resolved, Settings, Step};

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

/// Drift the automatic step aims for, well under the abort limit.
const AUTO_DRIFT_TARGET: f64 = 1e-7;
/// Sampling interval (units of 1/ω₀) used when the stride is automatic.
const AUTO_SAMPLE_INTERVAL: f64 = 1e-2;

#[derive(Parser)]
#[command(name = "fho", version, about = "Forced harmonic oscillator: constant-of-motion vs Hamiltonian quantization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one scheme and write series.csv
    Simulate(Common),
    /// Sweep the drive amplitude for both schemes and write sweep.csv
    Sweep(Common),
    /// Run the oracle suites
    Validate(Common),
    /// Sample the classical solution and write classical.csv
    Classical(Common),
}

#[derive(clap::Args)]
struct Common {
    /// TOML or JSON config file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    settings: Settings,
}

enum Failure {
    Config(String),
    Numerical(String),
    Validation(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NormDrift { .. } | Error::NonFinite { .. } => Failure::Numerical(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Config(format!("cannot write output: {e}"))
    }
}

fn resolve(common: &Common) -> Result<Resolved, Failure> {
    let file = match &common.config {
        Some(path) => load_file(path)?,
        None => Settings::default(),
    };
    Ok(Resolved::from_settings(&file.merge(common.settings.clone()))?)
}

/// Step and stride for one parameter set. `auto` takes the smaller of the
/// K and H recommendations so both schemes share a grid.
fn integration_settings(cfg: &Resolved, params: &OscillatorParams) -> Result<IntegrationSettings, Failure> {
    let t_end = cfg.t_end_tau();
    let dt = match cfg.dt {
        Step::Fixed(v) => v,
        Step::Auto => {
            let k = SchemeKind::constant_of_motion(cfg.case);
            let mut dt = 1e-3f64;
            for s in [k, SchemeKind::Hamiltonian] {
                dt = dt.min(recommended_step(params, s, cfg.n_states, t_end, AUTO_DRIFT_TARGET, 1e-3)?);
            }
            dt
        }
    };
    let stride = match (cfg.stride, cfg.dt) {
        (Some(s), _) => s,
        (None, Step::Fixed(_)) => 10,
        (None, Step::Auto) => ((AUTO_SAMPLE_INTERVAL / dt).round() as usize).max(1),
    };
    Ok(IntegrationSettings {
        dt,
        t_end,
        sample_every: stride,
        ..IntegrationSettings::default()
    })
}

fn scenario(cfg: &Resolved, params: OscillatorParams) -> Result<Scenario, Failure> {
    let mut sc = Scenario::new(params, cfg.scheme.kind(cfg.case));
    sc.truncation = fho_core::Truncation::new(cfg.n_states)?;
    sc.settings = integration_settings(cfg, &params)?;
    Ok(sc)
}

fn manifest(command: &str, cfg: &Resolved, diagnostics: serde_json::Value) -> String {
    let m = json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "diagnostics": diagnostics,
    });
    serde_json::to_string_pretty(&m).expect("manifest serializes") + "\n"
}

fn simulate(cfg: &Resolved) -> Result<(), Failure> {
    let params = cfg.params();
    let sc = scenario(cfg, params)?;
    let run = match run_scenario(&sc) {
        Ok(r) => r,
        Err(e @ Error::NormDrift { .. }) => {
            let hint = recommended_step(&params, sc.scheme, cfg.n_states, cfg.t_end_tau(), AUTO_DRIFT_TARGET, 1e-3)
                .map(|dt| format!("; a step near {dt:.2e} (or --dt auto) should hold"))
                .unwrap_or_default();
            return Err(Failure::Numerical(format!("{e}{hint}")));
        }
        Err(e) => return Err(e.into()),
    };
    output::write(&cfg.out, "series.csv", &output::series_csv(&run.series))?;
    let diag = json!({
        "scheme": sc.scheme.label(),
        "dt": sc.settings.dt,
        "stride": sc.settings.sample_every,
        "steps": run.steps,
        "samples": run.series.len(),
        "max_norm_drift": run.max_norm_drift,
        "final_norm_drift": run.final_norm_drift,
        "mean_entropy": run.series.mean_entropy()?,
        "mean_energy": run.series.mean_energy()?,
    });
    output::write(&cfg.out, "manifest.json", &manifest("simulate", cfg, diag))?;
    println!(
        "{}: {} samples, max norm drift {:.3e} -> {}",
        sc.scheme.label(),
        run.series.len(),
        run.max_norm_drift,
        cfg.out.join("series.csv").display()
    );
    Ok(())
}

fn sweep(cfg: &Resolved) -> Result<(), Failure> {
    // Surface configuration problems before spawning any work.
    scenario(cfg, cfg.params())?.validate()?;
    let result = sweep_with(&cfg.alphas, cfg.jobs, |alpha| {
        let params = cfg.params().with_drive_amplitude(alpha);
        let sc = scenario(cfg, params).map_err(|f| match f {
            Failure::Config(m) | Failure::Numerical(m) | Failure::Validation(m) => Error::InvalidSetup(m),
        })?;
        sweep_point(&sc, alpha)
    })?;
    output::write(&cfg.out, "sweep.csv", &output::sweep_csv(&result))?;
    let diag = json!({
        "rows": result.rows.len(),
        "failed_rows": result.failures(),
    });
    output::write(&cfg.out, "manifest.json", &manifest("sweep", cfg, diag))?;
    println!(
        "{} rows ({} failed) -> {}",
        result.rows.len(),
        result.failures(),
        cfg.out.join("sweep.csv").display()
    );
    if result.failures() > 0 {
        for row in &result.rows {
            if let Err(e) = &row.result {
                eprintln!("{e}");
            }
        }
        return Err(Failure::Numerical(format!("{} sweep rows failed", result.failures())));
    }
    Ok(())
}

fn validate(cfg: &Resolved) -> Result<(), Failure> {
    let vc = ValidationConfig {
        mass: cfg.mass,
        natural_frequency: cfg.omega0,
        seed: cfg.seed,
    };
    let reports = run_all(&vc);
    for r in &reports {
        println!(
            "{:<5} {:<24} residual {:>10.3e}  threshold {:>8.1e}  {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.residual,
            r.threshold,
            r.detail
        );
    }
    let json = serde_json::to_string_pretty(&json!({ "seed": cfg.seed, "suites": reports }))
        .expect("report serializes");
    output::write(&cfg.out, "validation.json", &(json + "\n"))?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(Failure::Validation(format!("{failed} suite(s) failed")));
    }
    Ok(())
}

fn classical(cfg: &Resolved) -> Result<(), Failure> {
    let params = cfg.params();
    params.validate()?;
    let dt = match cfg.dt {
        Step::Fixed(v) => v,
        Step::Auto => 1e-3,
    };
    let stride = cfg.stride.unwrap_or(10);
    let w0 = params.natural_frequency;
    let start = ClassicalState { x: cfg.x0, v: cfg.v0, t: 0.0 };
    let constants = integration_constants(&params, &start, cfg.case)?;
    let interval = dt * stride as f64;
    let samples = (cfg.t_end_tau() / interval).round() as usize;
    let mut rows = Vec::with_capacity(samples + 1);
    for i in 0..=samples {
        let t = i as f64 * interval / w0;
        let s = trajectory(&params, cfg.case, constants, t)?;
        rows.push([
            t,
            s.x,
            s.v,
            constant_of_motion(&params, &s, cfg.case)?,
            perturbation_w(&params, &s, cfg.case)?,
        ]);
    }
    output::write(&cfg.out, "classical.csv", &output::classical_csv(&rows))?;
    let diag = json!({ "c1": constants.c1, "c2": constants.c2, "samples": rows.len() });
    output::write(&cfg.out, "manifest.json", &manifest("classical", cfg, diag))?;
    println!("{} samples -> {}", rows.len(), cfg.out.join("classical.csv").display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (common, run): (&Common, fn(&Resolved) -> Result<(), Failure>) = match &cli.command {
        Command::Simulate(c) => (c, simulate),
        Command::Sweep(c) => (c, sweep),
        Command::Validate(c) => (c, validate),
        Command::Classical(c) => (c, classical),
    };
    match resolve(common).and_then(|cfg| run(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical abort: {m}");
            ExitCode::from(EXIT_NUMERICAL)
        }
        Err(Failure::Validation(m)) => {
            eprintln!("validation failed: {m}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}
