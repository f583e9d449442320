//! Forced harmonic oscillator quantized two ways: through a constant of
//! motion `K(x, v, t)` with the velocity operator, and through the
//! Hamiltonian `H(x, p, t)`. Both are expanded in the oscillator eigenbasis,
//! truncated, integrated with fixed-step RK4 and compared through level
//! populations, Boltzmann-Shannon entropy and mean energy.

pub mod classical;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod model;
pub mod observables;
pub mod validation;

pub use classical::{ClassicalState, DriveCase, IntegrationConstants};
pub use dynamics::{CoefficientState, IntegrationSettings, SchemeKind, Trajectory};
pub use error::{Error, Result};
pub use experiments::{Preset, Scenario, SweepResult, SweepRow};

pub use model::{OscillatorParams, ScaledParams, Truncation};
pub use observables::{ObservableSeries, ProbabilityVector};
