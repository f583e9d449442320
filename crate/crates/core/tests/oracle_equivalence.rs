use std::f64::consts::PI;

use fho_core::dynamics::{oracle, scheme_rhs, CoefficientState, SchemeKind};
use fho_core::model::{OscillatorParams, HBAR_SI};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

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

fn worst_mismatch(p: &OscillatorParams, scheme: SchemeKind, seed: u64) -> f64 {
    let n = 12;
    let rhs = scheme_rhs(scheme, p, n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let coeffs: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let tau = rng.random_range(0.0..100.0);
        let state = CoefficientState::new(tau, coeffs);
        let mut hand = vec![Complex64::new(0.0, 0.0); n];
        rhs.eval(tau, &state.coeffs, &mut hand);
        let reference = oracle::oracle_rhs(&state, p, scheme).unwrap();
        let scale = reference.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let diff = hand
            .iter()
            .zip(&reference)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        worst = worst.max(diff / scale);
    }
    worst
}

#[test]
fn hand_written_systems_match_ladder_matrices() {
    for (p, scheme) in [
        (params(1e-13, 0.5, 0.4), SchemeKind::KNonResonant),
        (params(3e-15, 1.7, -1.1), SchemeKind::KNonResonant),
        (params(1e-13, 1.0, 0.4), SchemeKind::KResonant),
        (params(2e-15, 1.0, 2.0), SchemeKind::KResonant),
        (params(1e-13, 0.5, 0.4), SchemeKind::Hamiltonian),
        (params(1e-13, 1.0, 0.0), SchemeKind::Hamiltonian),
    ] {
        let worst = worst_mismatch(&p, scheme, 7);
        println!("{scheme:?} alpha={} worst={worst:.3e}", p.drive_amplitude);
        assert!(worst <= 1e-12, "{scheme:?}: {worst:e}");
    }
}
