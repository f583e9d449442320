use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{scheme_rhs, CoefficientState, Rk4, SchemeKind};
use crate::error::{Error, Result};
use crate::model::OscillatorParams;

/// Largest tolerated |‖D‖² − ‖D(0)‖²| before a run aborts.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;

/// Fixed-step settings, all in dimensionless time τ = ω₀t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationSettings {
    pub dt: f64,
    pub t_end: f64,
    /// Keep every `sample_every`-th step.
    pub sample_every: usize,
    pub drift_limit: f64,
}

impl Default for IntegrationSettings {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_end: 50.0 * 2.0 * PI,
            sample_every: 10,
            drift_limit: NORM_DRIFT_LIMIT,
        }
    }
}

impl IntegrationSettings {
    /// Number of steps actually taken: `t_end/dt` rounded to the nearest
    /// step, then up to a whole number of sampling intervals.
    pub fn steps(&self) -> Result<usize> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidSetup(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidSetup(format!(
                "t_end must be > 0, got {}",
                self.t_end
            )));
        }
        if self.sample_every == 0 {
            return Err(Error::InvalidSetup("sample stride must be >= 1".into()));
        }
        let raw = (self.t_end / self.dt).round().max(1.0) as usize;
        Ok(raw.div_ceil(self.sample_every) * self.sample_every)
    }

    pub fn effective_t_end(&self) -> Result<f64> {
        Ok(self.steps()? as f64 * self.dt)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub scheme: SchemeKind,
    pub settings: IntegrationSettings,
    pub steps: usize,
    pub samples: Vec<CoefficientState>,
    pub max_norm_drift: f64,
    pub final_norm_drift: f64,
}

/// Fixed-step RK4 from `initial` (its `tau` is ignored; runs start at 0).
/// The state is never renormalized.
pub fn integrate(
    initial: &CoefficientState,
    params: &OscillatorParams,
    scheme: SchemeKind,
    settings: &IntegrationSettings,
) -> Result<Trajectory> {
    let steps = settings.steps()?;
    let n = initial.n_states();
    let rhs = scheme_rhs(scheme, params, n)?;
    let norm0 = initial.norm_sqr();
    if !norm0.is_finite() || norm0 == 0.0 {
        return Err(Error::InvalidSetup("initial state has zero or non-finite norm".into()));
    }

    let mut y = initial.coeffs.clone();
    let mut rk = Rk4::new(n);
    let dt = settings.dt;
    let mut samples = Vec::with_capacity(steps / settings.sample_every + 1);
    samples.push(CoefficientState::new(0.0, y.clone()));
    let mut max_drift = 0.0f64;
    let mut drift = 0.0;

    for i in 0..steps {
        let tau = i as f64 * dt;
        rk.step(&*rhs, tau, &mut y, dt)?;
        let norm: f64 = y.iter().map(|c| c.norm_sqr()).sum();
        drift = (norm - norm0).abs();
        max_drift = max_drift.max(drift);
        if drift > settings.drift_limit {
            return Err(Error::NormDrift {
                drift,
                limit: settings.drift_limit,
                tau: tau + dt,
                dtau: dt,
            });
        }
        if (i + 1) % settings.sample_every == 0 {
            samples.push(CoefficientState::new((i + 1) as f64 * dt, y.clone()));
        }
    }

    Ok(Trajectory {
        scheme,
        settings: *settings,
        steps,
        samples,
        max_norm_drift: max_drift,
        final_norm_drift: drift,
    })
}
