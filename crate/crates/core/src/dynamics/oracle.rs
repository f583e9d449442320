//! Matrix reconstruction of every coefficient system from operator algebra.
//!
//! Position and velocity are represented through ladder operators,
//! `x = √(ħ/2mω₀)(a + a†)` and `v = i√(ħω₀/2m)(a† − a)`; the perturbation is
//! assembled in SI from the classical drive shape, projected onto the first
//! `n` levels, and rotated into the interaction picture with `exp(iω_mn t)`.
//! Nothing here touches the hand-written systems in `rhs`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{CoefficientState, SchemeKind};
use crate::classical::{DriveCase, DriveShape};
use crate::error::{Error, Result};
use crate::model::OscillatorParams;

/// Largest basis the oracle is meant for.
pub const MAX_ORACLE_STATES: usize = 64;

type CMatrix = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Truncated `a`, `x` and `v` matrices.
#[derive(Debug, Clone)]
pub struct LadderOperators {
    pub annihilation: CMatrix,
    /// metres
    pub position: CMatrix,
    /// metres per second
    pub velocity: CMatrix,
}

impl LadderOperators {
    pub fn new(params: &OscillatorParams, n_states: usize) -> Self {
        let mut a = CMatrix::zeros(n_states, n_states);
        for k in 1..n_states {
            a[(k - 1, k)] = c((k as f64).sqrt());
        }
        let adag = a.adjoint();
        let m = params.mass;
        let w0 = params.natural_frequency;
        let hbar = params.hbar;
        let x_scale = (hbar / (2.0 * m * w0)).sqrt();
        let v_scale = (hbar * w0 / (2.0 * m)).sqrt();
        let position = (&a + &adag) * c(x_scale);
        let velocity = (&adag - &a) * Complex64::new(0.0, v_scale);
        Self {
            annihilation: a,
            position,
            velocity,
        }
    }
}

/// `W_mn(t) = ⟨m|W|n⟩` in joules at time `t` seconds.
///
/// For [`SchemeKind::KResonant`] the scalar `½mω₀²a(t)²` is left out, which
/// is exactly what the cubic phase transform removes.
pub fn perturbation_matrix(
    params: &OscillatorParams,
    scheme: SchemeKind,
    n_states: usize,
    t: f64,
) -> Result<CMatrix> {
    if n_states > MAX_ORACLE_STATES {
        return Err(Error::InvalidSetup(format!(
            "oracle supports at most {MAX_ORACLE_STATES} states, got {n_states}"
        )));
    }
    scheme.check(params)?;
    let ops = LadderOperators::new(params, n_states);
    let id = CMatrix::identity(n_states, n_states);
    let m = params.mass;
    let w0 = params.natural_frequency;
    let spring = 0.5 * m * w0 * w0;

    Ok(match scheme {
        SchemeKind::Hamiltonian => {
            // V(x, t) = −αx cos(ωt + φ), the potential of the applied force.
            let drive = (params.drive_frequency * t + params.drive_phase).cos();
            &ops.position * c(-params.drive_amplitude * drive)
        }
        SchemeKind::KNonResonant => {
            let DriveShape::NonResonant { a, b } = DriveShape::new(params, DriveCase::NonResonant)?
            else {
                unreachable!("non-resonant shape")
            };
            let (s, co) = (params.drive_frequency * t + params.drive_phase).sin_cos();
            let scalar = a * a * co * co + b * b * s * s;
            (&id * c(spring * scalar))
                + (&ops.position * c(-2.0 * spring * a * co))
                + (&ops.velocity * c(2.0 * spring * b * s / w0))
        }
        SchemeKind::KResonant => {
            let shape = DriveShape::new(params, DriveCase::Resonant)?;
            let DriveShape::Resonant { b, .. } = shape else {
                unreachable!("resonant shape")
            };
            let at = shape.secular(t);
            let (s, co) = (w0 * t + params.drive_phase).sin_cos();
            let scalar = 2.0 * at * b * co * s + b * b * s * s;
            (&id * c(spring * scalar))
                + (&ops.position * c(-2.0 * spring * at * s))
                + (&ops.velocity * c(-2.0 * spring * (at * co + b * s) / w0))
        }
    })
}

/// Largest entry of `W − W†` relative to the largest entry of `W`.
pub fn hermiticity_defect(matrix: &CMatrix) -> f64 {
    let scale = matrix.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let diff = matrix - matrix.adjoint();
    diff.iter().map(|v| v.norm()).fold(0.0, f64::max) / scale
}

/// Interaction-picture generator `G(τ) = −i e^{i(m−n)τ} W_mn / ħω₀`, so
/// that `dD/dτ = G D`.
pub fn generator(
    params: &OscillatorParams,
    scheme: SchemeKind,
    n_states: usize,
    tau: f64,
) -> Result<CMatrix> {
    let w0 = params.natural_frequency;
    let w = perturbation_matrix(params, scheme, n_states, tau / w0)?;
    let energy = params.hbar * w0;
    Ok(CMatrix::from_fn(n_states, n_states, |m, n| {
        let phase = Complex64::from_polar(1.0, (m as f64 - n as f64) * tau);
        Complex64::new(0.0, -1.0) * phase * w[(m, n)] / energy
    }))
}

/// dD/dτ from the matrix route.
pub fn oracle_rhs(
    state: &CoefficientState,
    params: &OscillatorParams,
    scheme: SchemeKind,
) -> Result<Vec<Complex64>> {
    let n = state.n_states();
    let g = generator(params, scheme, n, state.tau)?;
    let d = nalgebra::DVector::from_column_slice(&state.coeffs);
    Ok((g * d).iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::HBAR_SI;
    use std::f64::consts::PI;

    fn params(alpha: f64, ratio: f64) -> OscillatorParams {
        let w0 = 2.0 * PI * 1e9;
        OscillatorParams {
            mass: 1.6726219e-27,
            natural_frequency: w0,
            drive_amplitude: alpha,
            drive_frequency: if ratio == 1.0 { w0 } else { ratio * w0 },
            drive_phase: 0.3,
            hbar: HBAR_SI,
        }
    }

    #[test]
    fn commutator_is_identity_below_truncation() {
        let ops = LadderOperators::new(&params(0.0, 0.5), 8);
        let a = &ops.annihilation;
        let comm = a * a.adjoint() - a.adjoint() * a;
        for k in 0..7 {
            assert!((comm[(k, k)] - c(1.0)).norm() < 1e-14);
        }
        // [x, v] = iħ/m away from the top level
        let p = params(0.0, 0.5);
        let xv = &ops.position * &ops.velocity - &ops.velocity * &ops.position;
        let expect = p.hbar / p.mass;
        for k in 0..7 {
            assert!((xv[(k, k)] - Complex64::new(0.0, expect)).norm() < 1e-12 * expect);
        }
    }

    #[test]
    fn zero_drive_zero_matrix() {
        for (p, scheme) in [
            (params(0.0, 0.5), SchemeKind::KNonResonant),
            (params(0.0, 1.0), SchemeKind::KResonant),
            (params(0.0, 0.5), SchemeKind::Hamiltonian),
        ] {
            let g = generator(&p, scheme, 12, 3.0).unwrap();
            assert!(g.iter().all(|v| v.norm() == 0.0));
        }
    }

    #[test]
    fn perturbations_are_hermitian() {
        for (p, scheme) in [
            (params(1e-13, 0.5), SchemeKind::KNonResonant),
            (params(1e-13, 1.0), SchemeKind::KResonant),
            (params(1e-13, 0.5), SchemeKind::Hamiltonian),
        ] {
            for t in [0.0, 1.3e-10, 4.4e-9] {
                let w = perturbation_matrix(&p, scheme, 12, t).unwrap();
                assert!(hermiticity_defect(&w) <= 1e-13, "{scheme:?}");
            }
        }
    }

    #[test]
    fn rejects_large_basis_and_wrong_case() {
        assert!(perturbation_matrix(&params(1e-13, 0.5), SchemeKind::Hamiltonian, 65, 0.0).is_err());
        assert!(perturbation_matrix(&params(1e-13, 0.5), SchemeKind::KResonant, 4, 0.0).is_err());
        assert!(perturbation_matrix(&params(1e-13, 1.0), SchemeKind::KNonResonant, 4, 0.0).is_err());
    }
}
