//! Scenarios, scheme comparisons and drive-strength sweeps.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::DriveCase;
use crate::dynamics::{integrate, oracle, CoefficientState, IntegrationSettings, SchemeKind};
use crate::error::{Error, Result};
use crate::model::{OscillatorParams, Truncation, HBAR_SI};
use crate::observables::ObservableSeries;

/// Proton mass, kg.
pub const PROTON_MASS: f64 = 1.6726219e-27;
/// ω₀ = 2π · 1 GHz, rad/s.
pub const TRAP_FREQUENCY: f64 = 2.0 * PI * 1e9;
/// α, N.
pub const DRIVE_AMPLITUDE: f64 = 1e-13;
/// ω/ω₀ used by the non-resonant preset.
pub const NONRESONANT_FREQUENCY_RATIO: f64 = 0.5;

/// Dead-band applied to dP₀ when counting oscillations.
pub const OSCILLATION_DEAD_BAND: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    PaperResonant,
    PaperNonresonant,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::PaperResonant => "paper-resonant",
            Preset::PaperNonresonant => "paper-nonresonant",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "paper-resonant" => Some(Preset::PaperResonant),
            "paper-nonresonant" => Some(Preset::PaperNonresonant),
            _ => None,
        }
    }

    pub fn case(self) -> DriveCase {
        match self {
            Preset::PaperResonant => DriveCase::Resonant,
            Preset::PaperNonresonant => DriveCase::NonResonant,
        }
    }

    pub fn params(self) -> OscillatorParams {
        preset_params(self.case())
    }
}

/// Proton in a 1 GHz trap driven with α = 1e-13 N, φ = 0.
pub fn preset_params(case: DriveCase) -> OscillatorParams {
    let w0 = TRAP_FREQUENCY;
    OscillatorParams {
        mass: PROTON_MASS,
        natural_frequency: w0,
        drive_amplitude: DRIVE_AMPLITUDE,
        drive_frequency: match case {
            DriveCase::Resonant => w0,
            DriveCase::NonResonant => NONRESONANT_FREQUENCY_RATIO * w0,
        },
        drive_phase: 0.0,
        hbar: HBAR_SI,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    Ground,
    /// `(re, im)` pairs, must be normalized.
    Coefficients(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub params: OscillatorParams,
    pub scheme: SchemeKind,
    pub truncation: Truncation,
    pub settings: IntegrationSettings,
    pub initial: InitialState,
}

impl Scenario {
    /// Ground-state start with default truncation and settings.
    pub fn new(params: OscillatorParams, scheme: SchemeKind) -> Self {
        Self {
            params,
            scheme,
            truncation: Truncation::default(),
            settings: IntegrationSettings::default(),
            initial: InitialState::Ground,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.scheme.check(&self.params)?;
        self.settings.steps()?;
        self.initial_state()?;
        Ok(())
    }

    pub fn initial_state(&self) -> Result<CoefficientState> {
        let n = self.truncation.n_states();
        match &self.initial {
            InitialState::Ground => Ok(CoefficientState::ground(n)),
            InitialState::Coefficients(c) => {
                if c.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, got: c.len() });
                }
                let state = CoefficientState::new(
                    0.0,
                    c.iter().map(|&(re, im)| Complex64::new(re, im)).collect(),
                );
                let norm = state.norm_sqr();
                if !((norm - 1.0).abs() <= 1e-12) {
                    return Err(Error::InvalidSetup(format!(
                        "initial coefficients must be normalized, |D|² = {norm}"
                    )));
                }
                Ok(state)
            }
        }
    }

    /// Same scenario with the other scheme of the matching drive case.
    pub fn with_scheme(&self, scheme: SchemeKind) -> Self {
        Self { scheme, ..self.clone() }
    }

    pub fn with_drive_amplitude(&self, alpha: f64) -> Self {
        Self {
            params: self.params.with_drive_amplitude(alpha),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRun {
    pub series: ObservableSeries,
    pub steps: usize,
    pub max_norm_drift: f64,
    pub final_norm_drift: f64,
}

pub fn run_scenario(scenario: &Scenario) -> Result<ScenarioRun> {
    scenario.validate()?;
    let initial = scenario.initial_state()?;
    let traj = integrate(&initial, &scenario.params, scenario.scheme, &scenario.settings)?;
    Ok(ScenarioRun {
        series: ObservableSeries::from_trajectory(&traj, &scenario.params),
        steps: traj.steps,
        max_norm_drift: traj.max_norm_drift,
        final_norm_drift: traj.final_norm_drift,
    })
}

/// Sign changes of successive differences. Differences smaller than
/// `dead_band` in magnitude are skipped and do not reset the sign.
pub fn oscillation_count(values: &[f64], dead_band: f64) -> usize {
    let mut count = 0;
    let mut last = 0.0f64;
    for w in values.windows(2) {
        let d = w[1] - w[0];
        if d.abs() < dead_band {
            continue;
        }
        if last != 0.0 && d.signum() != last {
            count += 1;
        }
        last = d.signum();
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeSummary {
    pub oscillations: usize,
    pub min_ground_population: f64,
    /// nats
    pub mean_entropy: f64,
    /// J
    pub mean_energy: f64,
}

impl SchemeSummary {
    pub fn of(series: &ObservableSeries) -> Result<Self> {
        let p0 = series.level(0);
        Ok(Self {
            oscillations: oscillation_count(&p0, OSCILLATION_DEAD_BAND),
            min_ground_population: p0.iter().copied().fold(f64::INFINITY, f64::min),
            mean_entropy: series.mean_entropy()?,
            mean_energy: series.mean_energy()?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    /// max_t |P₀^first − P₀^second|
    pub max_ground_difference: f64,
    pub first: SchemeSummary,
    pub second: SchemeSummary,
}

/// Compares two runs sampled on the same grid. Sample times may differ by
/// rounding only.
pub fn compare_series(first: &ObservableSeries, second: &ObservableSeries) -> Result<Comparison> {
    if first.len() != second.len() {
        return Err(Error::GridMismatch);
    }
    let span = first.times.last().copied().unwrap_or(0.0).abs();
    let tol = 1e-12 * span;
    if first.times.iter().zip(&second.times).any(|(a, b)| (a - b).abs() > tol) {
        return Err(Error::GridMismatch);
    }
    let max_ground_difference = first
        .level(0)
        .iter()
        .zip(second.level(0))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(Comparison {
        max_ground_difference,
        first: SchemeSummary::of(first)?,
        second: SchemeSummary::of(second)?,
    })
}

/// Runs both scenarios and compares them. They must differ only in scheme.
pub fn compare_schemes(first: &Scenario, second: &Scenario) -> Result<Comparison> {
    if first.params != second.params
        || first.truncation != second.truncation
        || first.settings != second.settings
        || first.initial != second.initial
    {
        return Err(Error::InvalidSetup(
            "compared scenarios must differ only in scheme".into(),
        ));
    }
    let a = run_scenario(first)?;
    let b = run_scenario(second)?;
    compare_series(&a.series, &b.series)
}

/// `count` log-spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.log10(), hi.log10());
            (0..count)
                .map(|i| 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64))
                .collect()
        }
    }
}

/// 20 values of α from 1e-15 to 1e-12 N.
pub fn default_alpha_grid() -> Vec<f64> {
    log_grid(1e-15, 1e-12, 20)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepValues {
    pub s_bar_k: f64,
    pub s_bar_h: f64,
    /// J
    pub e_bar_k: f64,
    /// J
    pub e_bar_h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub result: std::result::Result<SweepValues, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// Sorted by α.
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.result.is_err()).count()
    }
}

/// Averages of the K and H runs for one drive amplitude.
pub fn sweep_point(base: &Scenario, alpha: f64) -> Result<SweepValues> {
    let sc = base.with_drive_amplitude(alpha);
    let k = sc.with_scheme(SchemeKind::constant_of_motion(DriveCase::of(&sc.params)));
    let h = sc.with_scheme(SchemeKind::Hamiltonian);
    let rk = run_scenario(&k)?;
    let rh = run_scenario(&h)?;
    Ok(SweepValues {
        s_bar_k: rk.series.mean_entropy()?,
        s_bar_h: rh.series.mean_entropy()?,
        e_bar_k: rk.series.mean_energy()?,
        e_bar_h: rh.series.mean_energy()?,
    })
}

/// Runs [`sweep_point`] for every α on at most `jobs` threads (0 = all
/// cores). Per-row failures are recorded, not propagated.
pub fn sweep_alpha(base: &Scenario, alphas: &[f64], jobs: usize) -> Result<SweepResult> {
    sweep_with(alphas, jobs, |alpha| sweep_point(base, alpha))
}

/// Like [`sweep_alpha`] with a caller-supplied row function.
pub fn sweep_with<F>(alphas: &[f64], jobs: usize, row: F) -> Result<SweepResult>
where
    F: Fn(f64) -> Result<SweepValues> + Sync,
{
    if alphas.is_empty() {
        return Err(Error::InvalidSetup("alpha grid is empty".into()));
    }
    if let Some(&bad) = alphas.iter().find(|a| !(**a >= 0.0 && a.is_finite())) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: bad,
            reason: "must be finite and >= 0",
        });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidSetup(format!("thread pool: {e}")))?;
    let mut rows: Vec<SweepRow> = pool.install(|| {
        alphas
            .par_iter()
            .map(|&alpha| SweepRow {
                alpha,
                result: row(alpha).map_err(|e| format!("alpha = {alpha:e}: {e}")),
            })
            .collect()
    });
    rows.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    Ok(SweepResult { rows })
}

/// Upper bound on the generator's rate, `max_τ ‖G(τ)‖_∞` sampled over
/// `[0, t_end]`, in units of ω₀.
pub fn rate_bound(
    params: &OscillatorParams,
    scheme: SchemeKind,
    n_states: usize,
    t_end: f64,
) -> Result<f64> {
    const SAMPLES: usize = 256;
    let mut rho = 0.0f64;
    for i in 0..=SAMPLES {
        let tau = t_end * i as f64 / SAMPLES as f64;
        let g = oracle::generator(params, scheme, n_states, tau)?;
        for r in 0..n_states {
            let row: f64 = (0..n_states).map(|c| g[(r, c)].norm()).sum();
            rho = rho.max(row);
        }
    }
    Ok(rho)
}

/// Largest fixed step (capped at `max_dt`) for which RK4's amplitude error,
/// `(ρ dτ)⁶/72` per step, accumulates to at most `drift_target` over
/// `t_end`.
pub fn recommended_step(
    params: &OscillatorParams,
    scheme: SchemeKind,
    n_states: usize,
    t_end: f64,
    drift_target: f64,
    max_dt: f64,
) -> Result<f64> {
    let rho = rate_bound(params, scheme, n_states, t_end)?;
    if rho == 0.0 {
        return Ok(max_dt);
    }
    let dt = (72.0 * drift_target / (t_end * rho.powi(6))).powf(0.2);
    Ok(dt.min(max_dt))
}

/// Settings whose samples fall every `sample_interval` up to `t_end`, with
/// the step from [`recommended_step`] shrunk to divide the interval.
/// Runs of different schemes built this way share a sample grid.
pub fn auto_settings(
    params: &OscillatorParams,
    scheme: SchemeKind,
    n_states: usize,
    t_end: f64,
    sample_interval: f64,
    drift_target: f64,
) -> Result<IntegrationSettings> {
    if !(sample_interval > 0.0 && sample_interval <= t_end) {
        return Err(Error::InvalidSetup(format!(
            "sample interval {sample_interval} must lie in (0, t_end]"
        )));
    }
    let dt = recommended_step(params, scheme, n_states, t_end, drift_target, sample_interval)?;
    let stride = (sample_interval / dt).ceil().max(1.0) as usize;
    Ok(IntegrationSettings {
        dt: sample_interval / stride as f64,
        t_end,
        sample_every: stride,
        ..IntegrationSettings::default()
    })
}
