//! Classical forced oscillator: the closed-form solution, its integration
//! constants, the constant of motion built from them and its split into the
//! free energy plus a drive-dependent perturbation.
//!
//! Everything here is in SI units. These functions double as the physics
//! oracle for the quantum layer.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::OscillatorParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DriveCase {
    Resonant,
    #[serde(rename = "nonresonant")]
    NonResonant,
}

impl DriveCase {
    pub fn of(params: &OscillatorParams) -> Self {
        if params.is_resonant() {
            DriveCase::Resonant
        } else {
            DriveCase::NonResonant
        }
    }

    /// Fails when the configured frequencies contradict the requested case.
    pub fn check(self, params: &OscillatorParams) -> Result<()> {
        match (self, params.is_resonant()) {
            (DriveCase::NonResonant, true) => Err(Error::ResonantDivision),
            (DriveCase::Resonant, false) => Err(Error::CaseMismatch {
                what: "resonant case",
                omega: params.drive_frequency,
                omega0: params.natural_frequency,
            }),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalState {
    pub x: f64,
    pub v: f64,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationConstants {
    pub c1: f64,
    pub c2: f64,
}

/// Amplitudes of the particular solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriveShape {
    /// `A = α/m(ω₀²−ω²)` and `B = αω/mω₀(ω₀²−ω²)`.
    NonResonant { a: f64, b: f64 },
    /// `a(t) = secular_rate · t` with `secular_rate = α/2mω₀`, and
    /// `b = α/2mω₀²`.
    Resonant { secular_rate: f64, b: f64 },
}

impl DriveShape {
    pub fn new(params: &OscillatorParams, case: DriveCase) -> Result<Self> {
        case.check(params)?;
        let m = params.mass;
        let w0 = params.natural_frequency;
        let alpha = params.drive_amplitude;
        Ok(match case {
            DriveCase::NonResonant => {
                let w = params.drive_frequency;
                let detuning = w0 * w0 - w * w;
                DriveShape::NonResonant {
                    a: alpha / (m * detuning),
                    b: alpha * w / (m * w0 * detuning),
                }
            }
            DriveCase::Resonant => DriveShape::Resonant {
                secular_rate: alpha / (2.0 * m * w0),
                b: alpha / (2.0 * m * w0 * w0),
            },
        })
    }

    /// a(t) for the resonant case, zero otherwise.
    pub fn secular(&self, t: f64) -> f64 {
        match *self {
            DriveShape::Resonant { secular_rate, .. } => secular_rate * t,
            DriveShape::NonResonant { .. } => 0.0,
        }
    }
}

/// Closed-form position and analytic velocity at time `t`.
pub fn trajectory(
    params: &OscillatorParams,
    case: DriveCase,
    constants: IntegrationConstants,
    t: f64,
) -> Result<ClassicalState> {
    let shape = DriveShape::new(params, case)?;
    let w0 = params.natural_frequency;
    let (s0, c0) = (w0 * t).sin_cos();
    let IntegrationConstants { c1, c2 } = constants;
    let homogeneous_x = c1 * c0 + c2 * s0;
    let homogeneous_v = w0 * (-c1 * s0 + c2 * c0);
    let (x, v) = match shape {
        DriveShape::NonResonant { a, .. } => {
            let w = params.drive_frequency;
            let (s, c) = (w * t + params.drive_phase).sin_cos();
            (homogeneous_x + a * c, homogeneous_v - a * w * s)
        }
        DriveShape::Resonant { secular_rate, .. } => {
            let (s, c) = (w0 * t + params.drive_phase).sin_cos();
            (
                homogeneous_x + secular_rate * t * s,
                homogeneous_v + secular_rate * (s + w0 * t * c),
            )
        }
    };
    Ok(ClassicalState { x, v, t })
}

/// C₁ and C₂ from a phase-space point and time.
pub fn integration_constants(
    params: &OscillatorParams,
    state: &ClassicalState,
    case: DriveCase,
) -> Result<IntegrationConstants> {
    let shape = DriveShape::new(params, case)?;
    let w0 = params.natural_frequency;
    let ClassicalState { x, v, t } = *state;
    let (s0, c0) = (w0 * t).sin_cos();
    let free1 = x * c0 - v / w0 * s0;
    let free2 = x * s0 + v / w0 * c0;
    Ok(match shape {
        DriveShape::NonResonant { a, .. } => {
            let ratio = params.drive_frequency / w0;
            let (s, c) = (params.drive_frequency * t + params.drive_phase).sin_cos();
            IntegrationConstants {
                c1: free1 - a * (c * c0 + ratio * s * s0),
                c2: free2 - a * (c * s0 - ratio * s * c0),
            }
        }
        DriveShape::Resonant { secular_rate, .. } => {
            let (s, c) = (w0 * t + params.drive_phase).sin_cos();
            IntegrationConstants {
                c1: free1 + secular_rate * (-t * s * c0 + t * c * s0 + s * s0 / w0),
                c2: free2 - secular_rate * (t * s * s0 + t * c * c0 + s * c0 / w0),
            }
        }
    })
}

/// K = ½mω₀²(C₁² + C₂²)
pub fn constant_of_motion(
    params: &OscillatorParams,
    state: &ClassicalState,
    case: DriveCase,
) -> Result<f64> {
    let IntegrationConstants { c1, c2 } = integration_constants(params, state, case)?;
    let w0 = params.natural_frequency;
    Ok(0.5 * params.mass * w0 * w0 * (c1 * c1 + c2 * c2))
}

/// K₀ = ½mv² + ½mω₀²x²
pub fn free_energy(params: &OscillatorParams, state: &ClassicalState) -> f64 {
    let w0 = params.natural_frequency;
    0.5 * params.mass * (state.v * state.v + w0 * w0 * state.x * state.x)
}

/// W = K − K₀, written out term by term.
pub fn perturbation_w(
    params: &OscillatorParams,
    state: &ClassicalState,
    case: DriveCase,
) -> Result<f64> {
    let shape = DriveShape::new(params, case)?;
    let w0 = params.natural_frequency;
    let scale = 0.5 * params.mass * w0 * w0;
    let ClassicalState { x, v, t } = *state;
    let bracket = match shape {
        DriveShape::NonResonant { a, b } => {
            let (s, c) = (params.drive_frequency * t + params.drive_phase).sin_cos();
            a * a * c * c - 2.0 * a * x * c + b * b * s * s + 2.0 * b * v / w0 * s
        }
        DriveShape::Resonant { b, .. } => {
            let at = shape.secular(t);
            let (s, c) = (w0 * t + params.drive_phase).sin_cos();
            at * at - 2.0 * at * v / w0 * c - 2.0 * b * v / w0 * s + 2.0 * at * b * c * s
                - 2.0 * at * x * s
                + b * b * s * s
        }
    };
    Ok(scale * bracket)
}

/// Integrates Newton's equation `m ẍ = −mω₀²x + α cos(ωt+φ)` with classical
/// RK4 at a fixed step and returns the state after every step, starting
/// with `initial`.
///
/// Shares no code with the closed-form solution above.
pub fn integrate_newton(
    params: &OscillatorParams,
    initial: ClassicalState,
    dt: f64,
    steps: usize,
) -> Vec<ClassicalState> {
    let w0sq = params.natural_frequency * params.natural_frequency;
    let force = params.drive_amplitude / params.mass;
    let accel =
        |t: f64, x: f64| -w0sq * x + force * (params.drive_frequency * t + params.drive_phase).cos();
    let mut out = Vec::with_capacity(steps + 1);
    let mut s = initial;
    out.push(s);
    for i in 0..steps {
        let t = initial.t + i as f64 * dt;
        let k1x = s.v;
        let k1v = accel(t, s.x);
        let k2x = s.v + 0.5 * dt * k1v;
        let k2v = accel(t + 0.5 * dt, s.x + 0.5 * dt * k1x);
        let k3x = s.v + 0.5 * dt * k2v;
        let k3v = accel(t + 0.5 * dt, s.x + 0.5 * dt * k2x);
        let k4x = s.v + dt * k3v;
        let k4v = accel(t + dt, s.x + dt * k3x);
        s = ClassicalState {
            x: s.x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
            v: s.v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
            t: initial.t + (i + 1) as f64 * dt,
        };
        out.push(s);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::HBAR_SI;
    use std::f64::consts::PI;

    fn params(alpha: f64, ratio: f64, phi: f64) -> OscillatorParams {
        let w0 = 2.0 * PI * 1e9;
        OscillatorParams {
            mass: 1.6726219e-27,
            natural_frequency: w0,
            drive_amplitude: alpha,
            drive_frequency: if ratio == 1.0 { w0 } else { ratio * w0 },
            drive_phase: phi,
            hbar: HBAR_SI,
        }
    }

    #[test]
    fn free_oscillator() {
        let p = params(0.0, 0.5, 0.0);
        let x0 = 3e-9;
        let w0 = p.natural_frequency;
        for &t in &[0.0, 1e-10, 3.7e-10, 2e-9] {
            for case in [DriveCase::NonResonant] {
                let s = trajectory(&p, case, IntegrationConstants { c1: x0, c2: 0.0 }, t).unwrap();
                assert!((s.x - x0 * (w0 * t).cos()).abs() < 1e-22);
                assert!((s.v + x0 * w0 * (w0 * t).sin()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn initial_positions() {
        let p = params(1e-13, 0.5, 0.0);
        let DriveShape::NonResonant { a, .. } = DriveShape::new(&p, DriveCase::NonResonant).unwrap()
        else {
            unreachable!()
        };
        let s = trajectory(&p, DriveCase::NonResonant, IntegrationConstants { c1: 1e-6, c2: 2e-6 }, 0.0)
            .unwrap();
        assert!((s.x - (1e-6 + a)).abs() <= 1e-15 * a.abs());

        let p = params(1e-13, 1.0, 0.0);
        let s = trajectory(&p, DriveCase::Resonant, IntegrationConstants { c1: 1e-6, c2: 2e-6 }, 0.0)
            .unwrap();
        assert_eq!(s.x, 1e-6);
    }

    #[test]
    fn constants_at_time_zero() {
        let p = params(1e-13, 0.5, 0.0);
        let DriveShape::NonResonant { a, .. } = DriveShape::new(&p, DriveCase::NonResonant).unwrap()
        else {
            unreachable!()
        };
        let st = ClassicalState { x: 1e-6, v: 40.0, t: 0.0 };
        let c = integration_constants(&p, &st, DriveCase::NonResonant).unwrap();
        assert!((c.c1 - (st.x - a)).abs() < 1e-20);
        assert!((c.c2 - st.v / p.natural_frequency).abs() < 1e-20);
    }

    #[test]
    fn zero_drive_constants_are_rotations() {
        let w0 = 2.0 * PI * 1e9;
        let st = ClassicalState { x: 2e-9, v: -7.0, t: 3.3e-10 };
        let (s, c) = (w0 * st.t).sin_cos();
        for case in [DriveCase::NonResonant, DriveCase::Resonant] {
            let p = params(0.0, if case == DriveCase::Resonant { 1.0 } else { 0.3 }, 0.2);
            let k = integration_constants(&p, &st, case).unwrap();
            assert!((k.c1 - (st.x * c - st.v / w0 * s)).abs() < 1e-24);
            assert!((k.c2 - (st.x * s + st.v / w0 * c)).abs() < 1e-24);
            assert_eq!(perturbation_w(&p, &st, case).unwrap(), 0.0);
            let energy = free_energy(&p, &st);
            let kk = constant_of_motion(&p, &st, case).unwrap();
            assert!(((kk - energy) / energy).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_state_zero_energy() {
        let p = params(0.0, 0.5, 0.0);
        let st = ClassicalState { x: 0.0, v: 0.0, t: 1e-9 };
        assert_eq!(constant_of_motion(&p, &st, DriveCase::NonResonant).unwrap(), 0.0);
        let p = params(1e-13, 1.0, 0.0);
        let st = ClassicalState { x: 0.0, v: 0.0, t: 0.0 };
        assert_eq!(perturbation_w(&p, &st, DriveCase::Resonant).unwrap(), 0.0);
    }

    #[test]
    fn case_mismatch_is_rejected() {
        let p = params(1e-13, 1.0, 0.0);
        let st = ClassicalState { x: 0.0, v: 0.0, t: 0.0 };
        assert_eq!(
            integration_constants(&p, &st, DriveCase::NonResonant),
            Err(Error::ResonantDivision)
        );
        let p = params(1e-13, 0.5, 0.0);
        assert!(matches!(
            perturbation_w(&p, &st, DriveCase::Resonant),
            Err(Error::CaseMismatch { .. })
        ));
    }

    #[test]
    fn resonant_amplitude_grows_linearly() {
        let p = params(1e-13, 1.0, 0.0);
        let period = 2.0 * PI / p.natural_frequency;
        let zero = IntegrationConstants { c1: 0.0, c2: 0.0 };
        // peak of t·sin(ω₀t) near quarter periods
        let peak = |n: f64| {
            trajectory(&p, DriveCase::Resonant, zero, (n + 0.25) * period)
                .unwrap()
                .x
        };
        let r = peak(20.0) / peak(10.0);
        assert!((r - 20.25 / 10.25).abs() < 1e-9);
    }
}
