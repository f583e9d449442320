use crate::error::{Error, Result};
use crate::model::OscillatorParams;

/// Constant couplings of the non-resonant K system, rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonresonantCouplings {
    pub a1: f64,
    pub b1: f64,
    pub c: f64,
    pub d: f64,
}

impl NonresonantCouplings {
    /// Divide every rate by ω₀ for use with τ = ω₀t.
    pub fn per_natural_frequency(&self, omega0: f64) -> Self {
        Self {
            a1: self.a1 / omega0,
            b1: self.b1 / omega0,
            c: self.c / omega0,
            d: self.d / omega0,
        }
    }
}

pub fn couplings_nonresonant(params: &OscillatorParams) -> Result<NonresonantCouplings> {
    if params.is_resonant() {
        return Err(Error::ResonantDivision);
    }
    let m = params.mass;
    let hbar = params.hbar;
    let w0 = params.natural_frequency;
    let w = params.drive_frequency;
    let alpha = params.drive_amplitude;
    let detuning = w0 * w0 - w * w;
    let quad = alpha * alpha / (2.0 * m * hbar * detuning * detuning);
    Ok(NonresonantCouplings {
        a1: quad * w0 * w0,
        b1: quad * w * w,
        c: alpha * w0 * w0 / detuning / (2.0 * m * hbar * w0).sqrt(),
        d: alpha * w / detuning * (w0 / (2.0 * m * hbar)).sqrt(),
    })
}

/// Time-dependent couplings of the resonant K system, rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonantCouplings {
    pub f: f64,
    pub g: f64,
    pub h: f64,
}

/// The constant factors in f, g and h.
///
/// `f = f_static sin²θ + f_secular t sinθ cosθ`,
/// `g = gh (sinθ + ω₀t cosθ)`, `h = gh ω₀t sinθ`, with `θ = ω₀t + φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonantPrefactors {
    pub f_static: f64,
    pub f_secular: f64,
    pub gh: f64,
    pub phase: f64,
}

impl ResonantPrefactors {
    pub fn new(params: &OscillatorParams) -> Self {
        let m = params.mass;
        let hbar = params.hbar;
        let w0 = params.natural_frequency;
        let alpha = params.drive_amplitude;
        Self {
            f_static: alpha * alpha / (8.0 * m * hbar * w0 * w0),
            f_secular: alpha * alpha / (4.0 * m * w0 * hbar),
            gh: alpha / (2.0 * (2.0 * m * hbar * w0).sqrt()),
            phase: params.drive_phase,
        }
    }

    /// Rescale so that [`Self::at_tau`] returns rates in units of ω₀.
    pub fn per_natural_frequency(&self, omega0: f64) -> Self {
        Self {
            f_static: self.f_static / omega0,
            f_secular: self.f_secular / (omega0 * omega0),
            gh: self.gh / omega0,
            phase: self.phase,
        }
    }

    /// Evaluate at `tau = ω₀t`. Units follow the prefactors.
    pub fn at_tau(&self, tau: f64) -> ResonantCouplings {
        let (s, c) = (tau + self.phase).sin_cos();
        ResonantCouplings {
            f: self.f_static * s * s + self.f_secular * tau * s * c,
            g: self.gh * (s + tau * c),
            h: self.gh * tau * s,
        }
    }
}

/// f, g and h in rad/s at time `t` seconds.
pub fn resonant_fgh(params: &OscillatorParams, t: f64) -> ResonantCouplings {
    let w0 = params.natural_frequency;
    let pre = ResonantPrefactors::new(params);
    let (s, c) = (w0 * t + params.drive_phase).sin_cos();
    ResonantCouplings {
        f: pre.f_static * s * s + pre.f_secular * t * s * c,
        g: pre.gh * (s + w0 * t * c),
        h: pre.gh * w0 * t * s,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianCoupling {
    /// λ = α√(ħ/2mω₀), J
    pub lambda: f64,
}

impl HamiltonianCoupling {
    /// λ/ħ, rad/s
    pub fn rate(&self, hbar: f64) -> f64 {
        self.lambda / hbar
    }
}

pub fn hamiltonian_coupling(params: &OscillatorParams) -> HamiltonianCoupling {
    HamiltonianCoupling {
        lambda: params.drive_amplitude
            * (params.hbar / (2.0 * params.mass * params.natural_frequency)).sqrt(),
    }
}
