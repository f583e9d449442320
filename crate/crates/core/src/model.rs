//! Physical parameters, truncation, the oscillator eigenbasis and the
//! dimensionless unit system used by every integrator.
//!
//! Internally time is measured in `1/ω₀`, energy in `ħω₀` and length in the
//! oscillator length `√(ħ/mω₀)`. SI values only appear at the boundary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant (CODATA 2018, exact since the SI redefinition).
pub const HBAR_SI: f64 = 1.054_571_817e-34;

/// Highest level accepted by [`eigenfunction`].
pub const MAX_EIGENFUNCTION_LEVEL: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    /// kg
    pub mass: f64,
    /// ω₀, rad/s
    pub natural_frequency: f64,
    /// α, N
    pub drive_amplitude: f64,
    /// ω, rad/s
    pub drive_frequency: f64,
    /// φ, rad
    pub drive_phase: f64,
    /// J·s
    pub hbar: f64,
}

impl OscillatorParams {
    pub fn validate(&self) -> Result<()> {
        positive("mass", self.mass)?;
        positive("natural_frequency", self.natural_frequency)?;
        positive("hbar", self.hbar)?;
        if !(self.drive_amplitude >= 0.0 && self.drive_amplitude.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "drive_amplitude",
                value: self.drive_amplitude,
                reason: "must be finite and >= 0",
            });
        }
        if !self.drive_frequency.is_finite() || self.drive_frequency < 0.0 {
            return Err(Error::InvalidParameter {
                name: "drive_frequency",
                value: self.drive_frequency,
                reason: "must be finite and >= 0",
            });
        }
        if !self.drive_phase.is_finite() {
            return Err(Error::InvalidParameter {
                name: "drive_phase",
                value: self.drive_phase,
                reason: "must be finite",
            });
        }
        Ok(())
    }

    /// Exact equality of the configured frequencies. Near-resonance is
    /// treated as non-resonant.
    pub fn is_resonant(&self) -> bool {
        self.drive_frequency == self.natural_frequency
    }

    pub fn with_drive_amplitude(mut self, alpha: f64) -> Self {
        self.drive_amplitude = alpha;
        self
    }

    /// √(ħ/mω₀)
    pub fn oscillator_length(&self) -> f64 {
        (self.hbar / (self.mass * self.natural_frequency)).sqrt()
    }

    /// ħω₀
    pub fn energy_quantum(&self) -> f64 {
        self.hbar * self.natural_frequency
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    n_states: usize,
}

impl Truncation {
    pub fn new(n_states: usize) -> Result<Self> {
        if n_states < 2 {
            return Err(Error::InvalidParameter {
                name: "n_states",
                value: n_states as f64,
                reason: "must be >= 2",
            });
        }
        Ok(Self { n_states })
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    /// ln(n_states), the entropy of the uniform distribution over the basis.
    pub fn max_entropy(&self) -> f64 {
        (self.n_states as f64).ln()
    }
}

impl Default for Truncation {
    fn default() -> Self {
        Self { n_states: 12 }
    }
}

/// One level of the unperturbed oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisLevel {
    pub level: usize,
    pub energy: f64,
}

impl BasisLevel {
    pub fn new(level: usize, params: &OscillatorParams) -> Self {
        Self {
            level,
            energy: eigen_energy(level, params),
        }
    }
}

/// E_n = ħω₀(n + 1/2)
pub fn eigen_energy(n: usize, params: &OscillatorParams) -> f64 {
    params.energy_quantum() * (n as f64 + 0.5)
}

/// ω_mn = (E_m − E_n)/ħ
pub fn transition_frequency(m: usize, n: usize, params: &OscillatorParams) -> f64 {
    (m as f64 - n as f64) * params.natural_frequency
}

/// Physicists' Hermite polynomial by the three-term recurrence.
pub(crate) fn hermite(n: usize, xi: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * xi;
    for k in 1..n {
        let next = 2.0 * xi * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Position-space eigenfunction Φ_n(x) in m^(-1/2), evaluated as
/// `A_n exp(-ξ²/2) H_n(ξ)` with `ξ = x/√(ħ/mω₀)`.
pub fn eigenfunction(n: usize, x: f64, params: &OscillatorParams) -> Result<f64> {
    if n > MAX_EIGENFUNCTION_LEVEL {
        return Err(Error::LevelOutOfRange {
            level: n,
            max: MAX_EIGENFUNCTION_LEVEL,
        });
    }
    let xi = x / params.oscillator_length();
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    let norm = (params.mass * params.natural_frequency / (std::f64::consts::PI * params.hbar))
        .powf(0.25)
        / (2f64.powi(n as i32) * factorial).sqrt();
    Ok(norm * (-0.5 * xi * xi).exp() * hermite(n, xi))
}

/// The SI scales that define the dimensionless system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Units {
    pub mass: f64,
    pub natural_frequency: f64,
    pub hbar: f64,
}

impl Units {
    /// 1/ω₀, seconds per unit of τ.
    pub fn time(&self) -> f64 {
        1.0 / self.natural_frequency
    }

    /// ħω₀
    pub fn energy(&self) -> f64 {
        self.hbar * self.natural_frequency
    }

    /// √(ħ/mω₀)
    pub fn length(&self) -> f64 {
        (self.hbar / (self.mass * self.natural_frequency)).sqrt()
    }

    /// Force that produces a dimensionless coupling λ/ħω₀ of one:
    /// √(2mħω₀³).
    pub fn coupling_force(&self) -> f64 {
        let w = self.natural_frequency;
        (2.0 * self.mass * self.hbar * w * w * w).sqrt()
    }
}

/// Parameters in oscillator units. Every coupling constant of the three
/// coefficient systems is a simple function of `drive` and
/// `frequency_ratio`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledParams {
    pub units: Units,
    /// λ/(ħω₀) with λ = α√(ħ/2mω₀).
    pub drive: f64,
    /// ω/ω₀
    pub frequency_ratio: f64,
    /// φ
    pub phase: f64,
    pub resonant: bool,
}

impl ScaledParams {
    pub fn to_si(&self) -> OscillatorParams {
        OscillatorParams {
            mass: self.units.mass,
            natural_frequency: self.units.natural_frequency,
            drive_amplitude: self.drive * self.units.coupling_force(),
            drive_frequency: if self.resonant {
                self.units.natural_frequency
            } else {
                self.frequency_ratio * self.units.natural_frequency
            },
            drive_phase: self.phase,
            hbar: self.units.hbar,
        }
    }

    /// Convert τ to seconds.
    pub fn seconds(&self, tau: f64) -> f64 {
        tau * self.units.time()
    }

    /// Convert seconds to τ.
    pub fn tau(&self, seconds: f64) -> f64 {
        seconds * self.units.natural_frequency
    }
}

pub fn scale_to_dimensionless(params: &OscillatorParams) -> Result<ScaledParams> {
    params.validate()?;
    let units = Units {
        mass: params.mass,
        natural_frequency: params.natural_frequency,
        hbar: params.hbar,
    };
    let resonant = params.is_resonant();
    Ok(ScaledParams {
        units,
        drive: params.drive_amplitude / units.coupling_force(),
        frequency_ratio: if resonant {
            1.0
        } else {
            params.drive_frequency / params.natural_frequency
        },
        phase: params.drive_phase,
        resonant,
    })
}
