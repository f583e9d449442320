//! Self-checks of the solver against independent references. Each suite
//! returns the worst residual it measured next to its threshold.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classical::{
    constant_of_motion, free_energy, integrate_newton, perturbation_w, ClassicalState, DriveCase,
};
use crate::dynamics::{
    integrate, oracle, rk4_step, scheme_rhs, CoefficientState, IntegrationSettings, SchemeKind,
};
use crate::error::Result;
use crate::model::{OscillatorParams, HBAR_SI};
use crate::observables::probabilities;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub threshold: f64,
    pub detail: String,
}

impl SuiteReport {
    fn at_most(name: &str, residual: f64, threshold: f64, detail: String) -> Self {
        Self {
            name: name.into(),
            passed: residual <= threshold,
            residual,
            threshold,
            detail,
        }
    }

    fn failed(name: &str, threshold: f64, detail: String) -> Self {
        Self {
            name: name.into(),
            passed: false,
            residual: f64::NAN,
            threshold,
            detail,
        }
    }
}

/// Oscillator and seed shared by every suite. Drive strengths are chosen
/// per suite relative to `λ/ħω₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationConfig {
    pub mass: f64,
    pub natural_frequency: f64,
    pub seed: u64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            mass: 1.6726219e-27,
            natural_frequency: 2.0 * PI * 1e9,
            seed: 0,
        }
    }
}

impl ValidationConfig {
    /// Parameters with dimensionless drive `Λ = λ/ħω₀`.
    pub fn params(&self, lambda: f64, ratio: f64, phase: f64) -> OscillatorParams {
        let w0 = self.natural_frequency;
        let alpha = lambda * (2.0 * self.mass * HBAR_SI * w0 * w0 * w0).sqrt();
        OscillatorParams {
            mass: self.mass,
            natural_frequency: w0,
            drive_amplitude: alpha,
            drive_frequency: if ratio == 1.0 { w0 } else { ratio * w0 },
            drive_phase: phase,
            hbar: HBAR_SI,
        }
    }

    fn scheme_cases(&self, lambda: f64) -> [(OscillatorParams, SchemeKind); 4] {
        [
            (self.params(lambda, 0.5, 0.3), SchemeKind::KNonResonant),
            (self.params(lambda, 1.0, 0.3), SchemeKind::KResonant),
            (self.params(lambda, 0.5, 0.3), SchemeKind::Hamiltonian),
            (self.params(lambda, 1.0, 0.3), SchemeKind::Hamiltonian),
        ]
    }
}

/// Signature of a right-hand side under test.
pub type RhsFn<'a> =
    &'a dyn Fn(SchemeKind, &OscillatorParams, &CoefficientState) -> Result<Vec<Complex64>>;

/// The hand-written systems.
pub fn hand_rhs(
    scheme: SchemeKind,
    params: &OscillatorParams,
    state: &CoefficientState,
) -> Result<Vec<Complex64>> {
    let rhs = scheme_rhs(scheme, params, state.n_states())?;
    let mut out = vec![Complex64::new(0.0, 0.0); state.n_states()];
    rhs.eval(state.tau, &state.coeffs, &mut out);
    Ok(out)
}

pub fn oracle_equivalence(cfg: &ValidationConfig) -> SuiteReport {
    oracle_equivalence_with(cfg, &hand_rhs)
}

/// Worst relative mismatch between `rhs` and the ladder-matrix oracle on
/// 100 random `(state, τ)` pairs per case, 12 levels.
pub fn oracle_equivalence_with(cfg: &ValidationConfig, rhs: RhsFn) -> SuiteReport {
    const NAME: &str = "oracle-equivalence";
    const TOL: f64 = 1e-12;
    let n = 12;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = 0.0f64;
    let mut pairs = 0;
    for lambda in [338.0, 0.7] {
        for (p, scheme) in cfg.scheme_cases(lambda) {
            for _ in 0..100 {
                let coeffs: Vec<Complex64> = (0..n)
                    .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect();
                let state = CoefficientState::new(rng.random_range(0.0..100.0), coeffs);
                let (hand, reference) = match (rhs(scheme, &p, &state), oracle::oracle_rhs(&state, &p, scheme)) {
                    (Ok(a), Ok(b)) => (a, b),
                    (Err(e), _) | (_, Err(e)) => return SuiteReport::failed(NAME, TOL, e.to_string()),
                };
                let scale = reference.iter().map(|v| v.norm()).fold(0.0, f64::max);
                let diff = hand
                    .iter()
                    .zip(&reference)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                worst = worst.max(diff / scale);
                pairs += 1;
            }
        }
    }
    SuiteReport::at_most(NAME, worst, TOL, format!("{pairs} random pairs, 12 levels"))
}

pub fn hermiticity(cfg: &ValidationConfig) -> SuiteReport {
    const NAME: &str = "hermiticity";
    const TOL: f64 = 1e-13;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x4e);
    let mut worst = 0.0f64;
    for (p, scheme) in cfg.scheme_cases(338.0) {
        for _ in 0..20 {
            let t = rng.random_range(0.0..100.0) / p.natural_frequency;
            match oracle::perturbation_matrix(&p, scheme, 12, t) {
                Ok(w) => worst = worst.max(oracle::hermiticity_defect(&w)),
                Err(e) => return SuiteReport::failed(NAME, TOL, e.to_string()),
            }
        }
    }
    SuiteReport::at_most(NAME, worst, TOL, "W − W† relative to max |W|".into())
}

fn worst_over_runs<F>(name: &str, tol: f64, detail: String, cases: &[(OscillatorParams, SchemeKind)], f: F) -> SuiteReport
where
    F: Fn(&OscillatorParams, SchemeKind) -> Result<f64>,
{
    let mut worst = 0.0f64;
    for (p, scheme) in cases {
        match f(p, *scheme) {
            Ok(r) => worst = worst.max(r),
            Err(e) => return SuiteReport::failed(name, tol, format!("{}: {e}", scheme.label())),
        }
    }
    SuiteReport::at_most(name, worst, tol, detail)
}

/// Norm drift over 50 natural periods at dτ = 1e-3 with a weak drive.
pub fn unitarity(cfg: &ValidationConfig) -> SuiteReport {
    let settings = IntegrationSettings::default();
    worst_over_runs(
        "unitarity",
        1e-8,
        "Λ = 0.01, dτ = 1e-3, 50 periods".into(),
        &cfg.scheme_cases(0.01),
        |p, s| {
            let traj = integrate(&CoefficientState::ground(12), p, s, &settings)?;
            Ok(traj.max_norm_drift)
        },
    )
}

/// α = 0: populations stay δ_k0.
pub fn stationarity(cfg: &ValidationConfig) -> SuiteReport {
    let settings = IntegrationSettings {
        t_end: 5.0 * 2.0 * PI,
        ..IntegrationSettings::default()
    };
    worst_over_runs(
        "stationarity",
        1e-12,
        "α = 0, 5 periods".into(),
        &cfg.scheme_cases(0.0),
        |p, s| {
            let traj = integrate(&CoefficientState::ground(12), p, s, &settings)?;
            let mut worst = 0.0f64;
            for sample in &traj.samples {
                for (k, pk) in probabilities(sample).0.iter().enumerate() {
                    let target = if k == 0 { 1.0 } else { 0.0 };
                    worst = worst.max((pk - target).abs());
                }
            }
            Ok(worst)
        },
    )
}

/// `η(τ) = iΛ ∫₀^τ cos(rs + φ) e^{is} ds` in closed form.
pub fn coherent_displacement(lambda: f64, ratio: f64, phase: f64, tau: f64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let term = |k: f64, ph: f64| {
        let rot = Complex64::from_polar(1.0, ph);
        if k == 0.0 {
            rot * tau
        } else {
            rot * ((i * k * tau).exp() - 1.0) / (i * k)
        }
    };
    i * lambda * 0.5 * (term(1.0 + ratio, phase) + term(1.0 - ratio, -phase))
}

/// Poisson populations `e^{−|η|²}|η|^{2n}/n!` for `n < n_states`.
pub fn poisson_populations(eta: Complex64, n_states: usize) -> Vec<f64> {
    let mean = eta.norm_sqr();
    let mut p = Vec::with_capacity(n_states);
    let mut term = (-mean).exp();
    for n in 0..n_states {
        p.push(term);
        term *= mean / (n + 1) as f64;
    }
    p
}

/// Hamiltonian populations against the untruncated driven-oscillator
/// solution over 50 periods. The residual is also reported as failing if
/// the top level ever exceeds 1e-10 in the reference.
pub fn coherent_state(cfg: &ValidationConfig) -> SuiteReport {
    const NAME: &str = "coherent-state";
    const TOL: f64 = 1e-6;
    let n = 12;
    let lambda = 0.004;
    let settings = IntegrationSettings::default();
    let mut worst = 0.0f64;
    let mut top = 0.0f64;
    for (ratio, phase) in [(1.0, 0.0), (0.5, 0.3), (1.0, 1.2)] {
        let p = cfg.params(lambda, ratio, phase);
        let traj = match integrate(&CoefficientState::ground(n), &p, SchemeKind::Hamiltonian, &settings) {
            Ok(t) => t,
            Err(e) => return SuiteReport::failed(NAME, TOL, e.to_string()),
        };
        for s in &traj.samples {
            let reference = poisson_populations(coherent_displacement(lambda, ratio, phase, s.tau), n);
            top = top.max(reference[n - 1]);
            for (a, b) in probabilities(s).0.iter().zip(&reference) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    let mut report = SuiteReport::at_most(
        NAME,
        worst,
        TOL,
        format!("Λ = {lambda}, top-level reference population ≤ {top:.1e}"),
    );
    if top >= 1e-10 {
        report.passed = false;
        report.detail.push_str(" (truncation not negligible)");
    }
    report
}

/// Relative drift of K along an RK4 solution of Newton's equation over 100
/// drive periods, both cases.
pub fn classical_invariance(cfg: &ValidationConfig) -> SuiteReport {
    const NAME: &str = "classical-invariance";
    const TOL: f64 = 1e-9;
    let mut worst = 0.0f64;
    for ratio in [1.0, 0.5] {
        let p = cfg.params(338.0, ratio, 0.3);
        let case = DriveCase::of(&p);
        let period = 2.0 * PI / p.drive_frequency;
        let per_period = 10_000;
        let dt = period / per_period as f64;
        let scale = p.drive_amplitude / (p.mass * p.natural_frequency * p.natural_frequency);
        let start = ClassicalState {
            x: 0.7 * scale,
            v: -0.4 * scale * p.natural_frequency,
            t: 0.0,
        };
        let path = integrate_newton(&p, start, dt, 100 * per_period);
        let k0 = match constant_of_motion(&p, &start, case) {
            Ok(k) => k,
            Err(e) => return SuiteReport::failed(NAME, TOL, e.to_string()),
        };
        for s in path.iter().step_by(100) {
            let k = constant_of_motion(&p, s, case).unwrap_or(f64::NAN);
            worst = worst.max(((k - k0) / k0).abs());
        }
    }
    SuiteReport::at_most(NAME, worst, TOL, "100 drive periods, 10000 steps each".into())
}

/// `K₀ + W = K` at 1000 random points per case.
pub fn decomposition(cfg: &ValidationConfig) -> SuiteReport {
    const NAME: &str = "classical-decomposition";
    const TOL: f64 = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xd3);
    let mut worst = 0.0f64;
    for ratio in [1.0, 0.5] {
        let p = cfg.params(338.0, ratio, 0.3);
        let case = DriveCase::of(&p);
        let w0 = p.natural_frequency;
        let scale = p.drive_amplitude / (p.mass * w0 * w0);
        for _ in 0..1000 {
            let s = ClassicalState {
                x: rng.random_range(-3.0..3.0) * scale,
                v: rng.random_range(-3.0..3.0) * scale * w0,
                t: rng.random_range(0.0..20.0) * 2.0 * PI / w0,
            };
            let (k, w) = match (constant_of_motion(&p, &s, case), perturbation_w(&p, &s, case)) {
                (Ok(k), Ok(w)) => (k, w),
                (Err(e), _) | (_, Err(e)) => return SuiteReport::failed(NAME, TOL, e.to_string()),
            };
            let k0 = free_energy(&p, &s);
            let mag = k.abs().max(k0.abs()).max(w.abs());
            worst = worst.max((k0 + w - k).abs() / mag);
        }
    }
    SuiteReport::at_most(NAME, worst, TOL, "1000 points per case".into())
}

fn final_state(p: &OscillatorParams, scheme: SchemeKind, dt: f64, t_end: f64) -> Result<Vec<Complex64>> {
    let rhs = scheme_rhs(scheme, p, 12)?;
    let steps = (t_end / dt).round() as usize;
    let mut s = CoefficientState::ground(12);
    for i in 0..steps {
        s = rk4_step(&s, &*rhs, dt)?;
        s.tau = (i + 1) as f64 * dt;
    }
    Ok(s.coeffs)
}

fn distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Ratio of global errors at dτ and dτ/2 after one period, per scheme,
/// against a dτ/16 reference, over τ = 6.4. Passing requires every ratio in [12, 20];
/// the residual is the ratio farthest from 16.
pub fn convergence_order(cfg: &ValidationConfig) -> SuiteReport {
    const NAME: &str = "convergence-order";
    let dt = 0.02;
    let t_end = 320.0 * dt;
    let mut ratios = Vec::new();
    for (p, scheme) in cfg.scheme_cases(1.0) {
        let run = |h: f64| final_state(&p, scheme, h, t_end);
        let (coarse, fine, reference) = match (run(dt), run(dt / 2.0), run(dt / 16.0)) {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
                return SuiteReport::failed(NAME, 16.0, e.to_string())
            }
        };
        ratios.push(distance(&coarse, &reference) / distance(&fine, &reference));
    }
    let worst = ratios
        .iter()
        .copied()
        .max_by(|a, b| (a - 16.0).abs().total_cmp(&(b - 16.0).abs()))
        .unwrap_or(f64::NAN);
    SuiteReport {
        name: NAME.into(),
        passed: ratios.iter().all(|r| (12.0..=20.0).contains(r)),
        residual: worst,
        threshold: 16.0,
        detail: format!(
            "error ratios {}",
            ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>().join(", ")
        ),
    }
}

pub fn run_all(cfg: &ValidationConfig) -> Vec<SuiteReport> {
    vec![
        oracle_equivalence(cfg),
        hermiticity(cfg),
        stationarity(cfg),
        unitarity(cfg),
        coherent_state(cfg),
        classical_invariance(cfg),
        decomposition(cfg),
        convergence_order(cfg),
    ]
}
