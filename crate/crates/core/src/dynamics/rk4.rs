use num_complex::Complex64;

use super::{CoefficientRhs, CoefficientState};
use crate::error::{Error, Result};

/// Classical fourth-order Runge-Kutta with reusable stage buffers.
#[derive(Debug, Clone)]
pub struct Rk4 {
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    tmp: Vec<Complex64>,
}

impl Rk4 {
    pub fn new(n: usize) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); n];
        Self {
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            tmp: z,
        }
    }

    /// Advance `y` from `tau` to `tau + dt` in place.
    pub fn step<R: CoefficientRhs + ?Sized>(
        &mut self,
        rhs: &R,
        tau: f64,
        y: &mut [Complex64],
        dt: f64,
    ) -> Result<()> {
        let n = y.len();
        if self.k1.len() != n {
            *self = Rk4::new(n);
        }
        let half = 0.5 * dt;
        rhs.eval(tau, y, &mut self.k1);
        for i in 0..n {
            self.tmp[i] = y[i] + self.k1[i] * half;
        }
        rhs.eval(tau + half, &self.tmp, &mut self.k2);
        for i in 0..n {
            self.tmp[i] = y[i] + self.k2[i] * half;
        }
        rhs.eval(tau + half, &self.tmp, &mut self.k3);
        for i in 0..n {
            self.tmp[i] = y[i] + self.k3[i] * dt;
        }
        rhs.eval(tau + dt, &self.tmp, &mut self.k4);
        let sixth = dt / 6.0;
        let mut finite = true;
        for i in 0..n {
            y[i] += (self.k1[i] + (self.k2[i] + self.k3[i]) * 2.0 + self.k4[i]) * sixth;
            finite &= y[i].re.is_finite() && y[i].im.is_finite();
        }
        if finite {
            Ok(())
        } else {
            Err(Error::NonFinite { tau: tau + dt })
        }
    }
}

/// One RK4 step of size `dt` (in τ) from `state`.
pub fn rk4_step<R: CoefficientRhs + ?Sized>(
    state: &CoefficientState,
    rhs: &R,
    dt: f64,
) -> Result<CoefficientState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidSetup(format!("step must be positive, got {dt}")));
    }
    let mut y = state.coeffs.clone();
    Rk4::new(y.len()).step(rhs, state.tau, &mut y, dt)?;
    Ok(CoefficientState::new(state.tau + dt, y))
}
