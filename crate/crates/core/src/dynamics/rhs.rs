//! Hand-written coefficient equations, component by component.
//!
//! Each system is written for `D_k = X_k + iY_k` with neighbours `k ± 1`.
//! Terms that reach outside `0..n` are dropped, which projects the coupling
//! operator onto the retained levels and keeps it Hermitian.

use num_complex::Complex64;

use super::couplings::{couplings_nonresonant, hamiltonian_coupling, NonresonantCouplings, ResonantPrefactors};
use super::{CoefficientRhs, CoefficientState, SchemeKind};
use crate::error::Result;
use crate::model::OscillatorParams;

#[inline]
fn neighbours(state: &[Complex64], k: usize) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let below = if k > 0 { state[k - 1] } else { zero };
    let above = state.get(k + 1).copied().unwrap_or(zero);
    (below, above)
}

/// Non-resonant constant-of-motion system, rates in units of ω₀.
#[derive(Debug, Clone)]
pub struct KNonResonantRhs {
    pub couplings: NonresonantCouplings,
    pub frequency_ratio: f64,
    pub phase: f64,
    sqrt_k: Vec<f64>,
}

impl KNonResonantRhs {
    pub fn new(params: &OscillatorParams, n_states: usize) -> Result<Self> {
        SchemeKind::KNonResonant.check(params)?;
        let couplings =
            couplings_nonresonant(params)?.per_natural_frequency(params.natural_frequency);
        Ok(Self {
            couplings,
            frequency_ratio: params.drive_frequency / params.natural_frequency,
            phase: params.drive_phase,
            sqrt_k: sqrt_table(n_states),
        })
    }
}

impl CoefficientRhs for KNonResonantRhs {
    fn eval(&self, tau: f64, state: &[Complex64], out: &mut [Complex64]) {
        let NonresonantCouplings { a1, b1, c, d } = self.couplings;
        let (sd, cd) = (self.frequency_ratio * tau + self.phase).sin_cos();
        let (s0, c0) = tau.sin_cos();
        let diag = a1 * cd * cd + b1 * sd * sd;
        for (k, o) in out.iter_mut().enumerate() {
            let (lo, hi) = neighbours(state, k);
            let (xl, yl, xh, yh) = (lo.re, lo.im, hi.re, hi.im);
            let rk = self.sqrt_k[k];
            let rk1 = self.sqrt_k[k + 1];
            let x = state[k].re;
            let y = state[k].im;

            let dx = -c * rk * (cd * c0 * yl + cd * s0 * xl)
                - c * rk1 * (cd * c0 * yh - cd * s0 * xh)
                + d * rk * (sd * c0 * xl - sd * s0 * yl)
                - d * rk1 * (sd * c0 * xh + sd * s0 * yh)
                + diag * y;
            let dy = c * rk * (cd * c0 * xl - cd * s0 * yl)
                + c * rk1 * (cd * c0 * xh + cd * s0 * yh)
                + d * rk * (sd * c0 * yl + sd * s0 * xl)
                - d * rk1 * (sd * c0 * yh - sd * s0 * xh)
                - diag * x;
            *o = Complex64::new(dx, dy);
        }
    }
}

/// Resonant constant-of-motion system for the phase-shifted coefficients,
/// rates in units of ω₀.
#[derive(Debug, Clone)]
pub struct KResonantRhs {
    pub prefactors: ResonantPrefactors,
    sqrt_k: Vec<f64>,
}

impl KResonantRhs {
    pub fn new(params: &OscillatorParams, n_states: usize) -> Result<Self> {
        SchemeKind::KResonant.check(params)?;
        Ok(Self {
            prefactors: ResonantPrefactors::new(params)
                .per_natural_frequency(params.natural_frequency),
            sqrt_k: sqrt_table(n_states),
        })
    }
}

impl CoefficientRhs for KResonantRhs {
    fn eval(&self, tau: f64, state: &[Complex64], out: &mut [Complex64]) {
        let fgh = self.prefactors.at_tau(tau);
        let (f, g, h) = (fgh.f, fgh.g, fgh.h);
        let (s0, c0) = tau.sin_cos();
        for (k, o) in out.iter_mut().enumerate() {
            let (lo, hi) = neighbours(state, k);
            let (xl, yl, xh, yh) = (lo.re, lo.im, hi.re, hi.im);
            let rk = self.sqrt_k[k];
            let rk1 = self.sqrt_k[k + 1];
            let x = state[k].re;
            let y = state[k].im;

            let dx = f * y - rk * ((h * xl - g * yl) * s0 + (h * yl + g * xl) * c0)
                + rk1 * ((h * xh + g * yh) * s0 - (h * yh - g * xh) * c0);
            let dy = -f * x
                + rk * ((h * xl - g * yl) * c0 - (h * yl + g * xl) * s0)
                + rk1 * ((h * xh + g * yh) * c0 + (h * yh - g * xh) * s0);
            *o = Complex64::new(dx, dy);
        }
    }
}

/// Hamiltonian system, rates in units of ω₀.
#[derive(Debug, Clone)]
pub struct HamiltonianRhs {
    /// λ/ħω₀
    pub lambda: f64,
    pub frequency_ratio: f64,
    pub phase: f64,
    sqrt_k: Vec<f64>,
}

impl HamiltonianRhs {
    pub fn new(params: &OscillatorParams, n_states: usize) -> Self {
        let w0 = params.natural_frequency;
        Self {
            lambda: hamiltonian_coupling(params).rate(params.hbar) / w0,
            frequency_ratio: params.drive_frequency / w0,
            phase: params.drive_phase,
            sqrt_k: sqrt_table(n_states),
        }
    }
}

impl CoefficientRhs for HamiltonianRhs {
    fn eval(&self, tau: f64, state: &[Complex64], out: &mut [Complex64]) {
        let drive = self.lambda * (self.frequency_ratio * tau + self.phase).cos();
        let (s0, c0) = tau.sin_cos();
        let (ls, lc) = (drive * s0, drive * c0);
        for (k, o) in out.iter_mut().enumerate() {
            let (lo, hi) = neighbours(state, k);
            let rk = self.sqrt_k[k];
            let rk1 = self.sqrt_k[k + 1];
            let dx = -ls * (rk * lo.re - rk1 * hi.re) - lc * (rk * lo.im + rk1 * hi.im);
            let dy = -ls * (rk * lo.im - rk1 * hi.im) + lc * (rk * lo.re + rk1 * hi.re);
            *o = Complex64::new(dx, dy);
        }
    }
}

/// √k for k in 0..=n, zeroed at k = n so the top row drops its k+1 terms.
fn sqrt_table(n_states: usize) -> Vec<f64> {
    let mut t: Vec<f64> = (0..=n_states).map(|k| (k as f64).sqrt()).collect();
    t[n_states] = 0.0;
    t
}

/// Boxed right-hand side for a scheme.
pub fn scheme_rhs(
    scheme: SchemeKind,
    params: &OscillatorParams,
    n_states: usize,
) -> Result<Box<dyn CoefficientRhs + Send + Sync>> {
    scheme.check(params)?;
    Ok(match scheme {
        SchemeKind::KNonResonant => Box::new(KNonResonantRhs::new(params, n_states)?),
        SchemeKind::KResonant => Box::new(KResonantRhs::new(params, n_states)?),
        SchemeKind::Hamiltonian => Box::new(HamiltonianRhs::new(params, n_states)),
    })
}

fn eval_on(rhs: &impl CoefficientRhs, state: &CoefficientState) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); state.n_states()];
    rhs.eval(state.tau, &state.coeffs, &mut out);
    out
}

/// dD/dτ of the non-resonant K system at `state.tau`.
pub fn rhs_k_nonresonant(
    state: &CoefficientState,
    params: &OscillatorParams,
    n_states: usize,
) -> Result<Vec<Complex64>> {
    state.check_len(n_states)?;
    Ok(eval_on(&KNonResonantRhs::new(params, n_states)?, state))
}

/// dD̃/dτ of the resonant K system at `state.tau`.
pub fn rhs_k_resonant(
    state: &CoefficientState,
    params: &OscillatorParams,
    n_states: usize,
) -> Result<Vec<Complex64>> {
    state.check_len(n_states)?;
    Ok(eval_on(&KResonantRhs::new(params, n_states)?, state))
}

/// dD/dτ of the Hamiltonian system at `state.tau`.
pub fn rhs_hamiltonian(
    state: &CoefficientState,
    params: &OscillatorParams,
    n_states: usize,
) -> Result<Vec<Complex64>> {
    state.check_len(n_states)?;
    Ok(eval_on(&HamiltonianRhs::new(params, n_states), state))
}
