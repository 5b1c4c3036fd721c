//! Single-mode Gaussian-channel model of an optical fiber probed by
//! stimulated Brillouin scattering, and the limits it places on detecting
//! an evanescent-coupling tap.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] builds per-segment Gaussian channels and folds them into a
//!   fiber-level channel.
//! * [`attack`] produces the clean and tapped output states for a scenario.
//! * [`detection`] evaluates the quantum Stein exponent, the photon-threshold
//!   and heterodyne exponents, and the probe-budget scaling laws.
//! * [`estimation`] covers quantum Fisher information, SLD measurements and
//!   Monte Carlo estimator variance.
//! * [`fock`] is a truncated number-basis oracle used to cross-check the
//!   closed forms above.

pub mod attack;
pub mod detection;
pub mod error;
pub mod estimation;
pub mod fock;
pub mod model;
pub mod optimize;
pub mod parallel;
pub mod photon;

pub use num_complex::Complex64 as Complex;

pub use attack::AttackScenario;
pub use error::{Error, Result};
pub use model::{Convention, DisplacedThermalState, GaussianChannel, Mat2, SegmentPhysical};
