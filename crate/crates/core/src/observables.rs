//! Level populations, Boltzmann-Shannon entropy, mean energy and their time
//! averages.

use crate::dynamics::{CoefficientState, Trajectory};
use crate::error::{Error, Result};
use crate::model::OscillatorParams;

/// Populations `p_k = |D_k|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(pub Vec<f64>);

impl ProbabilityVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

pub fn probabilities(state: &CoefficientState) -> ProbabilityVector {
    ProbabilityVector(state.coeffs.iter().map(|c| c.norm_sqr()).collect())
}

/// `S = −Σ p ln p` in nats, with `0 ln 0 = 0`.
pub fn entropy(p: &ProbabilityVector) -> f64 {
    let sum: f64 = p.0.iter().filter(|&&pk| pk > 0.0).map(|&pk| pk * pk.ln()).sum();
    0.0 - sum
}

/// `⟨E⟩ = ħω₀ Σ n p_n + ħω₀/2`, joules.
pub fn energy_expectation(p: &ProbabilityVector, params: &OscillatorParams) -> f64 {
    let quantum = params.energy_quantum();
    let mean_level: f64 = p.0.iter().enumerate().map(|(n, &pn)| n as f64 * pn).sum();
    quantum * mean_level + 0.5 * quantum
}

/// `(1/T) ∫ f dt` by the trapezoid rule on a uniform grid, `T` being the
/// span of `times`.
pub fn time_average(times: &[f64], values: &[f64]) -> Result<f64> {
    if times.len() != values.len() {
        return Err(Error::GridMismatch);
    }
    if values.len() < 2 {
        return Err(Error::TooFewSamples(values.len()));
    }
    let span = times[times.len() - 1] - times[0];
    let h = span / (times.len() - 1) as f64;
    if !(h > 0.0) {
        return Err(Error::NonUniformGrid);
    }
    for w in times.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h {
            return Err(Error::NonUniformGrid);
        }
    }
    let interior: f64 = values[1..values.len() - 1].iter().sum();
    let integral = h * (interior + 0.5 * (values[0] + values[values.len() - 1]));
    Ok(integral / span)
}

/// Observables sampled along one run, SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries {
    /// seconds
    pub times: Vec<f64>,
    /// `probabilities[i][k]` is level `k` at sample `i`.
    pub probabilities: Vec<Vec<f64>>,
    /// nats
    pub entropy: Vec<f64>,
    /// joules
    pub energy: Vec<f64>,
    pub norm: Vec<f64>,
}

impl ObservableSeries {
    pub fn from_trajectory(traj: &Trajectory, params: &OscillatorParams) -> Self {
        let n = traj.samples.len();
        let mut out = ObservableSeries {
            times: Vec::with_capacity(n),
            probabilities: Vec::with_capacity(n),
            entropy: Vec::with_capacity(n),
            energy: Vec::with_capacity(n),
            norm: Vec::with_capacity(n),
        };
        for s in &traj.samples {
            let p = probabilities(s);
            out.times.push(s.seconds(params));
            out.entropy.push(entropy(&p));
            out.energy.push(energy_expectation(&p, params));
            out.norm.push(p.total());
            out.probabilities.push(p.0);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn n_states(&self) -> usize {
        self.probabilities.first().map_or(0, Vec::len)
    }

    /// Population of level `k` over time.
    pub fn level(&self, k: usize) -> Vec<f64> {
        self.probabilities.iter().map(|p| p[k]).collect()
    }

    pub fn mean_entropy(&self) -> Result<f64> {
        time_average(&self.times, &self.entropy)
    }

    pub fn mean_energy(&self) -> Result<f64> {
        time_average(&self.times, &self.energy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::HBAR_SI;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn params() -> OscillatorParams {
        OscillatorParams {
            mass: 1.6726219e-27,
            natural_frequency: 2.0 * PI * 1e9,
            drive_amplitude: 0.0,
            drive_frequency: PI * 1e9,
            drive_phase: 0.0,
            hbar: HBAR_SI,
        }
    }

    fn state(c: &[(f64, f64)]) -> CoefficientState {
        CoefficientState::new(0.0, c.iter().map(|&(a, b)| Complex64::new(a, b)).collect())
    }

    #[test]
    fn populations() {
        let g = CoefficientState::ground(4);
        assert_eq!(probabilities(&g).0, vec![1.0, 0.0, 0.0, 0.0]);
        let h = 0.5f64.sqrt();
        let p = probabilities(&state(&[(h, 0.0), (h, 0.0), (0.0, 0.0)]));
        assert!((p.0[0] - 0.5).abs() < 1e-15 && (p.0[1] - 0.5).abs() < 1e-15);
        let rotated = state(&[(0.0, h), (-h * 0.6, h * 0.8), (0.0, 0.0)]);
        let q = probabilities(&rotated);
        for (a, b) in p.0.iter().zip(&q.0) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn entropy_values() {
        let pure = entropy(&ProbabilityVector(vec![1.0, 0.0, 0.0]));
        assert_eq!(pure, 0.0);
        assert!(pure.is_sign_positive());
        assert!((entropy(&ProbabilityVector(vec![0.5, 0.5])) - 2f64.ln()).abs() < 1e-15);
        let uniform = ProbabilityVector(vec![1.0 / 11.0; 11]);
        let s = entropy(&uniform);
        assert!((s - 11f64.ln()).abs() < 1e-14);
        assert!((s - 2.398).abs() < 5e-4);
    }

    #[test]
    fn energy_values() {
        let p = params();
        let q = p.energy_quantum();
        assert_eq!(energy_expectation(&ProbabilityVector(vec![1.0, 0.0]), &p), 0.5 * q);
        assert_eq!(energy_expectation(&ProbabilityVector(vec![0.0, 1.0]), &p), 1.5 * q);
        assert_eq!(energy_expectation(&ProbabilityVector(vec![0.5, 0.5]), &p), q);
    }

    #[test]
    fn averages() {
        let t: Vec<f64> = (0..=100).map(|i| i as f64 * 0.01).collect();
        assert_eq!(time_average(&t, &vec![3.5; 101]).unwrap(), 3.5);
        let ramp = time_average(&t, &t).unwrap();
        assert!((ramp - 0.5).abs() < 1e-15);
        let w = 2.0 * PI;
        let sine: Vec<f64> = t.iter().map(|&x| (w * x).sin()).collect();
        let dt = 0.01 * w;
        assert!(time_average(&t, &sine).unwrap().abs() < dt * dt);
    }

    #[test]
    fn average_errors() {
        assert_eq!(time_average(&[], &[]), Err(Error::TooFewSamples(0)));
        assert_eq!(time_average(&[1.0], &[2.0]), Err(Error::TooFewSamples(1)));
        assert_eq!(time_average(&[0.0, 1.0, 3.0], &[1.0; 3]), Err(Error::NonUniformGrid));
        assert_eq!(time_average(&[0.0, 1.0], &[1.0; 3]), Err(Error::GridMismatch));
    }

    fn distribution() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..1.0, 2..16).prop_filter_map("nonzero", |w| {
            let s: f64 = w.iter().sum();
            (s > 1e-6).then(|| w.iter().map(|x| x / s).collect())
        })
    }

    proptest! {
        #[test]
        fn entropy_bounded_and_symmetric(p in distribution(), seed in 0usize..1000) {
            let n = p.len();
            let s = entropy(&ProbabilityVector(p.clone()));
            prop_assert!(s >= -1e-15);
            prop_assert!(s <= (n as f64).ln() + 1e-12);
            let mut q = p.clone();
            q.rotate_left(seed % n);
            q.reverse();
            let s2 = entropy(&ProbabilityVector(q));
            prop_assert!((s - s2).abs() <= 1e-12);
        }

        #[test]
        fn energy_bounded(p in distribution()) {
            let pr = params();
            let q = pr.energy_quantum();
            let n = p.len() as f64;
            let e = energy_expectation(&ProbabilityVector(p), &pr);
            prop_assert!(e >= 0.5 * q * (1.0 - 1e-12));
            prop_assert!(e <= q * (n - 0.5) * (1.0 + 1e-12));
        }

        #[test]
        fn average_time_reversal(values in prop::collection::vec(-10.0f64..10.0, 2..64)) {
            let t: Vec<f64> = (0..values.len()).map(|i| i as f64 * 0.25).collect();
            let a = time_average(&t, &values).unwrap();
            let mut rev = values.clone();
            rev.reverse();
            let b = time_average(&t, &rev).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
    }
}
