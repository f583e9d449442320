//! Truncated coefficient dynamics for the three quantization schemes.
//!
//! All systems are integrated in the interaction picture with dimensionless
//! time `τ = ω₀t`. Each hand-written right-hand side has an independent
//! counterpart in [`oracle`] built from ladder-operator matrices.

mod couplings;
mod integrate;
pub mod oracle;
mod rhs;
mod rk4;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classical::DriveCase;
use crate::error::{Error, Result};
use crate::model::OscillatorParams;

pub use couplings::{
    couplings_nonresonant, hamiltonian_coupling, resonant_fgh, HamiltonianCoupling,
    NonresonantCouplings, ResonantCouplings, ResonantPrefactors,
};
pub use integrate::{integrate, IntegrationSettings, Trajectory, NORM_DRIFT_LIMIT};
pub use rhs::{
    rhs_hamiltonian, rhs_k_nonresonant, rhs_k_resonant, scheme_rhs, HamiltonianRhs,
    KNonResonantRhs, KResonantRhs,
};
pub use rk4::{rk4_step, Rk4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SchemeKind {
    /// Constant-of-motion quantization, ω ≠ ω₀.
    #[serde(rename = "k-nonresonant")]
    KNonResonant,
    /// Constant-of-motion quantization, ω = ω₀, in the phase-shifted
    /// variables D̃.
    #[serde(rename = "k-resonant")]
    KResonant,
    #[serde(rename = "hamiltonian")]
    Hamiltonian,
}

impl SchemeKind {
    /// The K scheme matching the configured drive case.
    pub fn constant_of_motion(case: DriveCase) -> Self {
        match case {
            DriveCase::Resonant => SchemeKind::KResonant,
            DriveCase::NonResonant => SchemeKind::KNonResonant,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SchemeKind::KNonResonant => "k-nonresonant",
            SchemeKind::KResonant => "k-resonant",
            SchemeKind::Hamiltonian => "hamiltonian",
        }
    }

    pub fn is_constant_of_motion(self) -> bool {
        !matches!(self, SchemeKind::Hamiltonian)
    }

    pub fn check(self, params: &OscillatorParams) -> Result<()> {
        let ok = match self {
            SchemeKind::KNonResonant => !params.is_resonant(),
            SchemeKind::KResonant => params.is_resonant(),
            SchemeKind::Hamiltonian => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::CaseMismatch {
                what: self.label(),
                omega: params.drive_frequency,
                omega0: params.natural_frequency,
            })
        }
    }
}

/// Coefficients of the truncated state at dimensionless time `tau`.
///
/// Interpretation depends on the scheme: `D_k` for the non-resonant K and
/// the Hamiltonian systems, `D̃_k` for the resonant K system.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientState {
    pub tau: f64,
    pub coeffs: Vec<Complex64>,
}

impl CoefficientState {
    /// `C_k(0) = δ_k0`
    pub fn ground(n_states: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n_states];
        coeffs[0] = Complex64::new(1.0, 0.0);
        Self { tau: 0.0, coeffs }
    }

    pub fn new(tau: f64, coeffs: Vec<Complex64>) -> Self {
        Self { tau, coeffs }
    }

    pub fn n_states(&self) -> usize {
        self.coeffs.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Time in seconds.
    pub fn seconds(&self, params: &OscillatorParams) -> f64 {
        self.tau / params.natural_frequency
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.coeffs.len() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                got: self.coeffs.len(),
            })
        }
    }
}

/// A right-hand side `dD/dτ = F(τ, D)`.
pub trait CoefficientRhs {
    fn eval(&self, tau: f64, state: &[Complex64], out: &mut [Complex64]);
}

impl<F> CoefficientRhs for F
where
    F: Fn(f64, &[Complex64], &mut [Complex64]),
{
    fn eval(&self, tau: f64, state: &[Complex64], out: &mut [Complex64]) {
        self(tau, state, out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseDirection {
    /// D → D̃
    Remove,
    /// D̃ → D
    Restore,
}

/// Accumulated phase `α²t³/24mħ` of the resonant transform.
pub fn resonant_phase(params: &OscillatorParams, t: f64) -> f64 {
    let alpha = params.drive_amplitude;
    alpha * alpha * t * t * t / (24.0 * params.mass * params.hbar)
}

/// `D = exp(−iα²t³/24mħ) D̃`, applied in either direction at time `t`
/// (seconds). Moduli are untouched.
pub fn resonant_phase_transform(
    state: &CoefficientState,
    params: &OscillatorParams,
    t: f64,
    direction: PhaseDirection,
) -> CoefficientState {
    let angle = match direction {
        PhaseDirection::Remove => resonant_phase(params, t),
        PhaseDirection::Restore => -resonant_phase(params, t),
    };
    let rot = Complex64::from_polar(1.0, angle);
    CoefficientState {
        tau: state.tau,
        coeffs: state.coeffs.iter().map(|c| c * rot).collect(),
    }
}
